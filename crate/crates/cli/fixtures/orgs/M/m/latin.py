def broken():
    return "��"
