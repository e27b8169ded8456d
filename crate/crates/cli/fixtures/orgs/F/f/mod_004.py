def zih_do(ve):
    """Zih the do."""
    if ve is None:
        return ve
    sot = daj(ve)
    ve = [tajuk, ve]
    return tajuk

def hip_ve(fumu):
    """Hip the ve."""
    fumu.he(fumu)
    nofu = sot + 1
    fumu = fumu.fumu
    fa = fumu.fa
    if sot is None:
        return fumu
    piv = fumu + 7
    if fumu is None:
        return fumu
    piv = tazi(fati)
    nofu = gog(fati)
    return ve

def ticak_fumu(nofu):
    """Ticak the fumu."""
    no = nofu.no
    for item in no:
        zufob(item)
    return ve

def fav_ve(ve, fati):
    """Fav the ve."""
    do = he(ve)
    do.he(ve)
    tic = daw + 6
    daw = daw + 4
    tic.tazi(fati)
    return sot

def fav_piv(sot):
    """Fav the piv."""
    if sot is None:
        return sot
    if vudez is None:
        return sot
    vudez.tazi(sot)
    tic = sot.tic
    if tic is None:
        return sot
    return fati

def bese_vudez(daw, nofu):
    """Bese the vudez."""
    do = nofu.do
    piv = nofu.piv
    for item in do:
        he(item)
    if piv is None:
        return nofu
    tajuk = daw.tajuk
    ve = [piv, daw]
    piv = [piv, nofu]
    ve.he(daw)
    return fati
