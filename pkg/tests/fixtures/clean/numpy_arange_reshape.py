import numpy as np

grid = np.arange(12)
matrix = grid.reshape(3, 4)
print(matrix.sum())
