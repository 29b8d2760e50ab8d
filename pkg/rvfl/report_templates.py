import pybars

report_templates = {
    "summary": """{{{title}}}
{{{underline}}}

Stream:  {{{stream.name}}} (n={{{stream.n}}}, d={{{stream.d}}}, m={{{stream.m}}})
Offline: {{{offline_count}}} samples, windowed accuracy over {{{window}}}
Seeds:   {{#each seeds}}{{{this}}} {{/each}}

{{{table}}}

{{#each methods}}
{{{accuracy_rank}}}. {{{method}}}: {{{pct accuracy_mean}}} +/- {{{pct accuracy_std}}} accuracy, {{{secs time_mean}}} s per run{{#if drifts_mean}}, {{{drifts_mean}}} drifts{{/if}}
{{/each}}
""",
    "calibrate": """theta = {{{theta}}}
newest {{{window}}} samples hold {{{limit}}} of the weight in the long run (target {{{alpha}}})
""",
}


def _pct(this, value):
    return "{0:.2f}%".format(100 * value)


def _secs(this, value):
    return "{0:.2f}".format(value)


helpers = {
    "pct": _pct,
    "secs": _secs,
}

_compiler = pybars.Compiler()


def render(name, data):
    """
    Fill the named template with data.

    Examples
    --------
    >>> print(render("calibrate", {"theta": "1.0032241", "window": 500, "limit": "0.8", "alpha": 0.8}))
    theta = 1.0032241
    newest 500 samples hold 0.8 of the weight in the long run (target 0.8)
    <BLANKLINE>
    """
    template = _compiler.compile(report_templates[name])
    return str(template(data, helpers=helpers))
