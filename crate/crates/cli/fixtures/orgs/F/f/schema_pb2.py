# Auto-generated by protoc. Do not edit.

DESCRIPTOR = object()

def _build(name):
    return DESCRIPTOR
