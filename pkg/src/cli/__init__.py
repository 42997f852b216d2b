"""
Command-line surface for the embedding toolkit
"""
