import numpy as np

# one period sampled at 100 points
t = np.linspace(0.0, 6.28, 100)
wave = np.sin(t)
print(wave.max())
