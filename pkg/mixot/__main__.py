"""Entry point for ``python -m mixot``."""

from .cli import main

if __name__ == '__main__':
    main()
