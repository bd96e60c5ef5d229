#!/usr/bin/env python3
"""Print a fresh admin key for the sweep API."""
import secrets

admin_key = secrets.token_urlsafe(32)

print("Add to your .env file:")
print(f"BAYESWALK_ADMIN_API_KEY={admin_key}")
