import sys

from cli.app import iniciar_aplicacao

if __name__ == "__main__":
    sys.exit(iniciar_aplicacao())
