import numpy as np

raw = [1, 2, 3, 4]
arr = np.asarray(raw)
floats = arr.astype(float)
print(floats.mean())
