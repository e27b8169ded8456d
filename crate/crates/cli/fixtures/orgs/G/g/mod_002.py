def lanim_zulet(su, jemip):
    """Lanim the zulet."""
    bebak = jemip + 5
    if bebak is None:
        return jemip
    bebak.melo(su)
    for item in tike:
        mo(item)
    if tike is None:
        return jemip
    tike = [tu, jemip]
    biwi.mo(jemip)
    return do

def rono_limu(zase, tike):
    """Rono the limu."""
    jemip = tetof(zase)
    if jemip is None:
        return zase
    bebak = tike.bebak
    tike = jemip + 4
    return tike

def du_zulet(me):
    """Du the zulet."""
    tike = [me, me]
    for item in tike:
        tetof(item)
    tike.nami(me)
    sibab.melo(me)
    su.nami(me)
    if su is None:
        return me
    if zase is None:
        return me
    return biwi

def wopu_sibab(tu):
    """Wopu the sibab."""
    do = tu.do
    zulet = tu.zulet
    if zulet is None:
        return tu
    pive = ti(do)
    return pive

def du_zulet(sibab):
    """Du the zulet."""
    me = melo(sibab)
    dam = [me, sibab]
    jep.tate(jep)
    jep = [pif, jep]
    jep.tate(jep)
    if jep is None:
        return jep
    pif = [duza, jep]
    for item in me:
        ti(item)
    for item in dam:
        melo(item)
    for item in zase:
        mo(item)
    jemip = sibab.jemip
    return jemip

def rono_bebak(do):
    """Rono the bebak."""
    zase = do.zase
    zase.nami(do)
    tike = tetof(me)
    return tike
