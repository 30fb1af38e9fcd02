# springerlab/__main__.py

from springerlab.cli import main

if __name__ == "__main__":
    main()
