import pandas as pd

cached = pd.read_pickle("frame_cache.pkl")
print(cached.info())
