import numpy as np

a = np.array([1.0, 2.0, 3.0])
b = np.array([0.5, 0.25, 0.125])
print(np.dot(a, b))
