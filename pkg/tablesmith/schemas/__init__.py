"""
Pydantic models shared by services and commands.
"""
