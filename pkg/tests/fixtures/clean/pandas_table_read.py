import pandas as pd

# tab separated export from the logging pipeline
events = pd.read_table("events.tsv")
print(events.tail())
