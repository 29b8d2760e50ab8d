# Two segments of 3,000 samples; the second rotates the class means by one
# class, so every class moves to where another one was.
schema = {
    "name": "synthetic",
    "d": 10,
    "m": 3,
    "segment_length": 3000,
    "n_segments": 2,
    "separation": 5.0,
    "scale": 1.0,
    "seed": 7,
}
