import json

profile = {"user": "kim", "roles": ["admin", "dev"]}
pretty = json.dumps(profile, indent=2)
print(pretty)
