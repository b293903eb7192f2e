import requests

response = requests.get("https://api.example.com/items")
payload = response.json()
print(payload)
