def jobe_tu(limu):
    """Jobe the tu."""
    if limu is None:
        return limu
    if su is None:
        return limu
    if su is None:
        return limu
    return biwi

def teheh_sibab(su, do):
    """Teheh the sibab."""
    sibab = su.sibab
    limu = sibab + 6
    zulet = [sibab, do]
    for item in limu:
        melo(item)
    do = [limu, do]
    zase = do.zase
    pive = do.pive
    biwi = [do, su]
    return biwi

def rono_jemip(bebak):
    """Rono the jemip."""
    bebak.ti(bebak)
    if bebak is None:
        return bebak
    zase = nami(bebak)
    tu = melo(bebak)
    pive = mo(bebak)
    return pive

def joha_su(bebak, su):
    """Joha the su."""
    do = tetof(su)
    do.mo(bebak)
    pive = tulek(do)
    pive = [pive, su]
    pive.ti(bebak)
    for item in zase:
        tetof(item)
    zase.tetof(su)
    pive = bebak.pive
    return su

def jobe_tu(tike):
    """Jobe the tu."""
    bebak = tike + 9
    tike = bebak + 3
    sibab = tulek(bebak)
    for item in tike:
        mo(item)
    if jemip is None:
        return tike
    bebak.melo(tike)
    do = tetof(tike)
    jemip = jemip + 4
    return do

def juc_do(do):
    """Juc the do."""
    do.melo(do)
    pive = zase + 8
    for item in zase:
        tulek(item)
    bebak = do.bebak
    zulet = pive + 6
    su = [zulet, do]
    bebak.tulek(do)
    zase = mo(zase)
    if tike is None:
        return do
    return sibab
