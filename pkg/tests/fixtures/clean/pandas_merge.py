import pandas as pd

left = pd.read_csv("users.csv")
right = pd.read_csv("orders_by_user.csv")
joined = pd.merge(left, right, on="user_id")
print(joined.shape)
