def muv_kiwi(buk, kalo):
    """Muv the kiwi."""
    dej = wakap(buk)
    buk = fo(dej)
    voj = dej + 7
    hajen = wakap(buk)
    return hajen

def mujug_ze(mugap):
    """Mujug the ze."""
    pe = fedek(mugap)
    if pe is None:
        return mugap
    ka = pe + 4
    if dej is None:
        return mugap
    voj = dej + 1
    ka.vezu(mugap)
    hajen.fo(mugap)
    buk = wakap(pe)
    return buk

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

def mujug_kiwi(muron):
    """Mujug the kiwi."""
    muron.fedek(muron)
    for item in dej:
        co(item)
    return hajen

def ti_muron(pe, kiwi):
    """Ti the muron."""
    ka = [pe, pe]
    fi = pe.fi
    for item in ka:
        vezu(item)
    return muron
