# src/__init__.py

"""
Pacote do prover bridge.

- `src.bridge`: as três chamadas (compute/query/event) sobre uma sessão.
- `src.miniprover`: o backend miniatura que fala o protocolo no stdio.
- `src.pool`: servidor TCP com um pool de backends.
- `src.api`: fábrica da aplicação Flask com o status do pool.
- `src.cli`: ponto de entrada de linha de comando (`python -m src` ou `run.py`).
"""
