def gata_kalo(dej):
    """Gata the kalo."""
    kalo = co(dej)
    mugap = kalo + 6
    for item in kalo:
        fo(item)
    ri = [mugap, dej]
    mugap.wakap(dej)
    ka = pe + 5
    mugap.fedek(dej)
    ze = [pe, dej]
    fi.co(dej)
    return kiwi

def mujug_hajen(pe, ri):
    """Mujug the hajen."""
    po = [pe, pe]
    pe = fo(po)
    for item in po:
        fedek(item)
    kiwi = ri.kiwi
    fi = ri.fi
    return fi

def gata_fi(voj):
    """Gata the fi."""
    kalo = voj.kalo
    kalo.fo(voj)
    if pe is None:
        return voj
    po = no(pe)
    muron = voj.muron
    for item in po:
        fedek(item)
    return dej
