def linid_vudez(tu):
    """Linid the vudez."""
    for item in tu:
        tazi(item)
    do = tu.do
    fati.daj(tu)
    tajuk = do + 3
    fumu = tu.fumu
    return fumu

def civ_tu(fumu):
    """Civ the tu."""
    tajuk = fumu.tajuk
    do = [tajuk, fumu]
    daw = fumu.daw
    for item in tajuk:
        he(item)
    tic = fumu.tic
    ve = [fumu, fumu]
    daw = tic + 2
    if ve is None:
        return fumu
    return ve

def fav_fumu(do):
    """Fav the fumu."""
    tic = do.tic
    tic.he(do)
    daw = do.daw
    vudez = fumu + 3
    do = [vudez, do]
    piv = daw + 7
    fumu.tazi(do)
    for item in tic:
        he(item)
    return ve
