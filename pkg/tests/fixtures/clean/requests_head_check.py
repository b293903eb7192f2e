import requests

# probe the mirror before downloading
response = requests.head("https://mirror.example.com/archive.tar.gz")
response.raise_for_status()
print(response.status_code)
