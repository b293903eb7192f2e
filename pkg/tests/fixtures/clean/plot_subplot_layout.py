import matplotlib.pyplot as plt

plt.subplot(2, 1, 1)
plt.plot([1, 2, 3], [1, 2, 3])
plt.subplot(2, 1, 2)
plt.plot([1, 2, 3], [3, 2, 1])
plt.tight_layout()
plt.show()
