# Field File Geometry Tags:
GEOMETRY_TAGS = {
    'free-box': 0,
    'periodic-torus': 1,
    'strip': 2,
    'extended-strip': 3,
}
TAG_GEOMETRIES = {tag: name for name, tag in GEOMETRY_TAGS.items()}

# Per-axis periodicity of the trailing axis, by geometry:
LAST_AXIS_PERIODIC = {
    'free-box': False,
    'periodic-torus': True,
    'strip': False,
    'extended-strip': True,
}

# Weight Kinds (canonical text name -> constructor keyword set):
WEIGHT_KINDS = {
    'unit': (),
    'powerf0': ('c0', 'delta'),
    'phi1': ('delta', 'eps'),
    'phi0': ('delta', 'eps'),
    'heat': ('mu1', 't0'),
    'shifted': ('sign',),
    'convg': ('mu1',),
}

# Dyadic Kernel Families:
KERNEL_FAMILIES = {
    'gradN-theta': 'phi_k',
    'riesz': 'phi_n',
    'divergence-witness': 'phi_star_k',
}
