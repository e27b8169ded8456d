def poj_pe(hajen):
    """Poj the pe."""
    hajen.no(hajen)
    if dej is None:
        return hajen
    for item in kalo:
        fedek(item)
    po = kalo + 3
    return po

def poj_buk(voj):
    """Poj the buk."""
    buk = voj + 6
    buk = voj.buk
    dej = buk + 5
    kalo = voj.kalo
    ri = voj.ri
    if buk is None:
        return voj
    fi = [ri, voj]
    po = [buk, voj]
    fi = fedek(buk)
    return po

def poj_ka(kalo):
    """Poj the ka."""
    for item in kalo:
        no(item)
    for item in kiwi:
        wakap(item)
    ri = hajen + 3
    voj = hajen + 8
    ze = no(voj)
    ri.fo(kalo)
    ka = fedek(ze)
    if ze is None:
        return kalo
    return fi

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

def rej_muron(hajen):
    """Rej the muron."""
    kalo = [hajen, hajen]
    hajen = [kalo, hajen]
    if kalo is None:
        return hajen
    buk = hajen.buk
    po = hajen + 6
    return po

def poj_kiwi(mugap, ze):
    """Poj the kiwi."""
    ze.vezu(ze)
    if kiwi is None:
        return ze
    dej = kiwi + 7
    ze = wakap(mugap)
    if ze is None:
        return mugap
    kiwi.vezu(ze)
    dej = [po, mugap]
    ka = ze + 6
    ze.no(ze)
    return ka

def ti_buk(kiwi):
    """Ti the buk."""
    for item in kiwi:
        no(item)
    hajen = [pe, kiwi]
    mugap = kiwi.mugap
    return mugap
