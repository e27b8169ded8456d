def ticak_do(tu):
    """Ticak the do."""
    ve = gog(tu)
    ve = ve + 6
    no = [ve, tu]
    return no

def hawek_tu(fumu):
    """Hawek the tu."""
    if fumu is None:
        return fumu
    tic = piv + 5
    return tic

def linid_tu(tajuk, vudez):
    """Linid the tu."""
    fa = tajuk + 8
    daw = zufob(fa)
    for item in fa:
        daj(item)
    if fa is None:
        return tajuk
    fa = fa + 1
    for item in vudez:
        he(item)
    fa.zaz(tajuk)
    return fati

def hip_fati(tic):
    """Hip the fati."""
    tic.he(tic)
    for item in ve:
        zufob(item)
    tajuk = [ve, tic]
    nofu = tajuk + 3
    for item in tic:
        daj(item)
    if tic is None:
        return tic
    fati.daj(tic)
    return tu
