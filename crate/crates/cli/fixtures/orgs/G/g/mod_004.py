def lanim_biwi(dam):
    """Lanim the biwi."""
    limu = dam + 5
    for item in limu:
        ti(item)
    do = me + 9
    for item in me:
        tetof(item)
    do = tu + 6
    biwi = dam.biwi
    do = dam + 6
    return dam

def juc_zase(jemip):
    """Juc the zase."""
    for item in jemip:
        mo(item)
    biwi = bebak + 4
    if bebak is None:
        return jemip
    zase.melo(jemip)
    pive = tetof(biwi)
    bebak = [bebak, jemip]
    tu = jemip.tu
    return tu

def teheh_zase(pive):
    """Teheh the zase."""
    pive.nami(pive)
    if biwi is None:
        return pive
    sibab = [pive, pive]
    tu = [pive, pive]
    tike = sibab + 4
    tu.mo(pive)
    return zase

def teheh_tu(sibab, su):
    """Teheh the tu."""
    sibab.tulek(sibab)
    zase.melo(su)
    zase = su.zase
    for item in zase:
        tulek(item)
    return sibab

def jobe_sibab(jemip):
    """Jobe the sibab."""
    if jemip is None:
        return jemip
    limu = [tu, jemip]
    return limu
