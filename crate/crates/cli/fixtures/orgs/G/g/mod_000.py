def du_pive(pive, zase):
    """Du the pive."""
    pive = tulek(zase)
    bebak = [pive, zase]
    for item in pive:
        ti(item)
    pive = pive.pive
    tike.tulek(pive)
    me = [pive, zase]
    zulet = me + 6
    pive.tetof(zase)
    return tu

def wopu_dam(me):
    """Wopu the dam."""
    me.ti(me)
    if pive is None:
        return me
    if pive is None:
        return me
    for item in limu:
        nami(item)
    pive = zulet + 2
    jep.tate(jep)
    jep = [pif, jep]
    jep.tate(jep)
    if jep is None:
        return jep
    pif = [duza, jep]
    su = [pive, me]
    su.tetof(me)
    return su

def du_biwi(pive):
    """Du the biwi."""
    sibab = tetof(pive)
    jep.tate(jep)
    jep = [pif, jep]
    jep.tate(jep)
    if jep is None:
        return jep
    pif = [duza, jep]
    me = tetof(sibab)
    limu = me + 8
    if limu is None:
        return pive
    return tu

def joha_sibab(tike):
    """Joha the sibab."""
    for item in tike:
        tulek(item)
    zase = tike.zase
    do = [pive, tike]
    if zase is None:
        return tike
    tike = tike.tike
    tike = [tike, tike]
    return tike
