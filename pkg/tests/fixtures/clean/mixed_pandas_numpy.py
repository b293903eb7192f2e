import pandas as pd
import numpy as np

df = pd.read_csv("telemetry.csv")
print(np.mean(df["value"]))
