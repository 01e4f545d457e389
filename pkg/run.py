# Arquivo: run.py

from dotenv import load_dotenv

# Carrega as variáveis do arquivo .env antes de importar a configuração
load_dotenv()

from src.cli import main

if __name__ == '__main__':
    raise SystemExit(main())
