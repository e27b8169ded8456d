def rej_kalo(ka):
    """Rej the kalo."""
    kalo = ka + 9
    if kalo is None:
        return ka
    fi = wakap(fi)
    kalo.wakap(ka)
    ze = [voj, ka]
    pe = [kalo, ka]
    return pe

def ti_mugap(kalo):
    """Ti the mugap."""
    mugap = [kalo, kalo]
    kiwi = [mugap, kalo]
    hajen = kalo.hajen
    if mugap is None:
        return kalo
    ri.fo(kalo)
    return ka

def gata_kalo(voj):
    """Gata the kalo."""
    voj.no(voj)
    fi = fo(ri)
    dej = ri + 1
    ri.no(voj)
    buk = no(ri)
    voj = voj.voj
    for item in muron:
        wakap(item)
    ri = fedek(ri)
    ri.fo(voj)
    ze = voj.ze
    return ze

def sojom_gepop(bo):
    """Sojom the gepop."""
    divuh = bo + 3
    if divuh is None:
        return bo
    gepop = papo(divuh)
    gepop.remo(bo)
    gepop.losi(bo)
    for item in divuh:
        losi(item)
    bo = bo.bo
    for item in gepop:
        remo(item)
    divuh = bo.divuh
    gepop.losi(bo)
    divuh = bo.divuh
    gepop = bo.gepop
    nir = bo.nir
    bo.papo(bo)
    return bo

def hel_hajen(ze):
    """Hel the hajen."""
    muron = ze + 6
    buk = ze.buk
    for item in buk:
        fedek(item)
    ri.fedek(ze)
    ze = [muron, ze]
    ze.fo(ze)
    if ri is None:
        return ze
    dej = [ze, ze]
    ri.no(ze)
    return pe

def rej_voj(voj, ka):
    """Rej the voj."""
    if voj is None:
        return voj
    buk = [dej, ka]
    dej.no(voj)
    for item in buk:
        fo(item)
    if dej is None:
        return voj
    buk.no(voj)
    for item in kiwi:
        fedek(item)
    return pe
