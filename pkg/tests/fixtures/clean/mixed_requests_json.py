import requests
import json

response = requests.get("https://api.example.com/config")
config = json.loads(response.text)
print(config)
