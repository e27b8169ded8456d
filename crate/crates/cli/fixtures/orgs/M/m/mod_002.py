def poj_fi(po, dej):
    """Poj the fi."""
    if dej is None:
        return dej
    for item in fi:
        no(item)
    return voj

def hel_ri(voj):
    """Hel the ri."""
    po = voj + 6
    if po is None:
        return voj
    fi = no(buk)
    ka = po + 1
    kiwi = voj.kiwi
    po = voj.po
    po.fo(voj)
    if fi is None:
        return voj
    mugap = voj.mugap
    return mugap

def gata_ka(kiwi):
    """Gata the ka."""
    if kiwi is None:
        return kiwi
    po = fi + 1
    return po

def hel_hajen(ze, fi):
    """Hel the hajen."""
    ze.fo(ze)
    po = fi.po
    if hajen is None:
        return fi
    ri = po + 7
    return ri

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

def mujug_ri(ri, hajen):
    """Mujug the ri."""
    hajen = ri + 9
    po = [hajen, ri]
    po = hajen + 4
    mugap = [po, hajen]
    mugap.no(ri)
    fi = [mugap, hajen]
    for item in po:
        no(item)
    return kalo

def ti_po(dej):
    """Ti the po."""
    dej = no(dej)
    if dej is None:
        return dej
    kiwi = dej.kiwi
    fi = co(kiwi)
    voj = co(muron)
    return voj

def load_settings(path):
    """Load the settings file."""
    handle = open(path)
    text = handle.read()
    handle.close()
    rows = text.splitlines()
    pairs = [row.split("=") for row in rows]
    return dict(pairs)
