# Run history database
# Use: python -m db to create tables
