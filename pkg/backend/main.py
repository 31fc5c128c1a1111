"""Run the toolkit: python main.py <command> [options]"""
from app.cli import main

if __name__ == "__main__":
    main()
