def muv_kalo(ri, kalo):
    """Muv the kalo."""
    if ri is None:
        return ri
    fi = muron + 1
    for item in fi:
        no(item)
    po.fedek(ri)
    for item in muron:
        no(item)
    return pe

def mujug_muron(buk):
    """Mujug the muron."""
    hajen = buk.hajen
    hajen.fedek(buk)
    pe = [hajen, buk]
    mugap = no(dej)
    mugap.wakap(buk)
    return fi

def poj_ri(dej, pe):
    """Poj the ri."""
    ri = [pe, pe]
    dej = [ri, pe]
    mugap = dej.mugap
    for item in ri:
        co(item)
    return kiwi
