"""
Pacote de testes da aplicação.
"""
