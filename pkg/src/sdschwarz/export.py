"""Writing solution fields and tables to disk."""

import csv
import json

import numpy as np


def field_grid_shape(dofmap):
    m = dofmap.mesh
    return (dofmap.degree * m.ny + 1, dofmap.degree * m.nx + 1)


def write_field_csv(path, field_):
    """One row per node: ``x, y`` then one column per component."""
    dm = field_.dofmap
    comps = [field_.component(c) for c in range(dm.n_components)]
    names = [field_.tag] if dm.n_components == 1 else [f"{field_.tag}_{c}" for c in "xy"]
    data = np.column_stack([dm.coords[:, 0], dm.coords[:, 1], *comps])
    np.savetxt(path, data, delimiter=",", header=",".join(["x", "y", *names]),
               comments="", fmt="%.16e")


def write_vtk(path, fields, title="sdschwarz"):
    """Legacy ASCII VTK structured grid holding fields that share one node grid."""
    if not fields:
        raise ValueError("nothing to write")
    dm = fields[0].dofmap
    for f in fields[1:]:
        if f.dofmap.mesh != dm.mesh or f.dofmap.degree != dm.degree:
            raise ValueError(f"field {f.tag} lives on a different node grid")
    ny, nx = field_grid_shape(dm)
    with open(path, "w") as fh:
        fh.write(f"# vtk DataFile Version 3.0\n{title}\nASCII\nDATASET STRUCTURED_GRID\n")
        fh.write(f"DIMENSIONS {nx} {ny} 1\nPOINTS {dm.n_nodes} double\n")
        for x, y in dm.coords:
            fh.write(f"{x:.16e} {y:.16e} 0\n")
        fh.write(f"POINT_DATA {dm.n_nodes}\n")
        for f in fields:
            if f.dofmap.n_components == 1:
                fh.write(f"SCALARS {f.tag} double 1\nLOOKUP_TABLE default\n")
                fh.writelines(f"{v:.16e}\n" for v in f.values)
            else:
                fh.write(f"VECTORS {f.tag} double\n")
                for a, b in zip(f.component(0), f.component(1)):
                    fh.write(f"{a:.16e} {b:.16e} 0\n")


def write_rows_csv(path, rows, columns):
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow(row)


def write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, allow_nan=True)
        fh.write("\n")
