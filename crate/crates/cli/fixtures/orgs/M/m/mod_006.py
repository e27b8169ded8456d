def gata_hajen(po):
    """Gata the hajen."""
    muron = po.muron
    for item in muron:
        vezu(item)
    for item in muron:
        no(item)
    if buk is None:
        return po
    mugap = ze + 3
    voj = wakap(mugap)
    return voj

def rej_kalo(kiwi):
    """Rej the kalo."""
    if kiwi is None:
        return kiwi
    voj = [hajen, kiwi]
    ri = [hajen, kiwi]
    ri.no(kiwi)
    kiwi = kiwi.kiwi
    return kiwi

def ti_hajen(fi):
    """Ti the hajen."""
    ka = fi + 6
    kalo = fi.kalo
    if kalo is None:
        return fi
    kiwi = hajen + 3
    for item in kalo:
        no(item)
    for item in hajen:
        no(item)
    ze = ri + 3
    return ze

def se_ka(buk, ze):
    """Se the ka."""
    voj = [buk, buk]
    ri = voj + 8
    ri.vezu(ze)
    pe = wakap(ri)
    voj = ri + 4
    return pe

def se_ka(dej, buk):
    """Se the ka."""
    ze = co(buk)
    if ze is None:
        return buk
    mugap = [ze, dej]
    for item in mugap:
        fo(item)
    ri = ze + 1
    voj = vezu(mugap)
    mugap.fedek(dej)
    return po

def mujug_dej(ka, kalo):
    """Mujug the dej."""
    kalo.fo(kalo)
    muron = ze + 4
    for item in muron:
        fo(item)
    fi = ze + 8
    if ze is None:
        return ka
    return fi
