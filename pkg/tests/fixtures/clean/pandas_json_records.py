import pandas as pd

records = pd.read_json("records.json")
records.to_csv("records_export.csv")
print(len(records))
