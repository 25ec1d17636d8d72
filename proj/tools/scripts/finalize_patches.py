"""Sets lattice constants and species on generated patch files and writes
species and subset files. Regenerate the raw geometry with
`rydqsl lattice --kagome ... --save-json` first."""
import json
import math
import pathlib

root = pathlib.Path(__file__).resolve().parents[2] / "patches"


def load(name):
    return json.loads((root / f"{name}.json").read_text())


def dump(path, obj):
    # one site per line keeps the files diffable
    lines = ["{"]
    items = list(obj.items())
    for k, (key, value) in enumerate(items):
        end = "," if k + 1 < len(items) else ""
        if isinstance(value, list) and value and isinstance(value[0], list):
            body = ",\n    ".join(json.dumps(v) for v in value)
            lines.append(f'  "{key}": [\n    {body}\n  ]{end}')
        else:
            lines.append(f'  "{key}": {json.dumps(value)}{end}')
    lines.append("}")
    path.write_text("\n".join(lines) + "\n")


def hexagon_sites(p, center):
    cx, cy = center
    return [i for i, (x, y) in enumerate(p["coords"]) if abs(math.hypot(x - cx, y - cy) - math.sqrt(3)) < 1e-9]


def species_from(n, cs):
    return ["Cs" if i in cs else "Rb" for i in range(n)]


def write_patch(name, a_um, cs):
    p = load(name)
    n = len(p["coords"])
    p["coords"] = [[round(x, 15), round(y, 15)] for x, y in p["coords"]]
    out = {"name": name, "a_um": a_um, "coords": p["coords"], "species": species_from(n, cs),
           "edge_sites": p["edge_sites"], "stars": p["stars"]}
    dump(root / f"{name}.json", out)
    return p


(root / "species").mkdir(exist_ok=True)
(root / "subsets").mkdir(exist_ok=True)

write_patch("triangle-3", 4.0, set())

s3 = math.sqrt(3) / 2
star4 = {"name": "star-4", "a_um": 4.0,
         "coords": [[1.0, 0.0], [0.5, round(s3, 15)], [-1.0, 0.0], [-0.5, round(-s3, 15)]],
         "species": ["Rb", "Rb", "Rb", "Rb"], "edge_sites": [0, 1, 2, 3], "stars": [[0, 1, 2, 3]]}
dump(root / "star-4.json", star4)

write_patch("kagome-9", 4.5, {3, 4, 5})

p12 = load("kagome-12")
inner12 = hexagon_sites(p12, (3.0, math.sqrt(3)))
assert len(inner12) == 4, inner12
write_patch("kagome-12", 4.0, set(inner12))
third = species_from(12, set(inner12))
half = species_from(12, set(inner12) | {0, 11})
dump(root / "species" / "kagome-12-third.json", {"patch": "kagome-12", "labels": third})
dump(root / "species" / "kagome-12-half.json", {"patch": "kagome-12", "labels": half})
dump(root / "subsets" / "kagome-12.json",
     {"patch": "kagome-12",
      "comment": "A and B share the edge 4-5, B and C share 6-7, A and C share none; sites 0 and 11 are in no subset",
      "A": [1, 2, 3, 5], "B": [4, 6, 8], "C": [7, 9, 10]})

p18 = load("kagome-18")
inner18 = hexagon_sites(p18, (3.0, math.sqrt(3)))
assert len(inner18) == 6
write_patch("kagome-18", 4.0, set(inner18))

p21 = load("kagome-21")
inner21 = hexagon_sites(p21, (3.0, math.sqrt(3)))
assert len(inner21) == 6
pendant = [18, 19, 20]
dist1 = set(inner21) | set(pendant)
# one outer site per ring triangle (the one following the hexagon edge
# counter-clockwise) plus the outermost pendant site
outer = []
for t in range(6):
    ids = [i for i in range(3 * t, 3 * t + 3) if i not in inner21]
    ang = [math.atan2(p21["coords"][i][1] - math.sqrt(3), p21["coords"][i][0] - 3.0) for i in ids]
    outer.append(ids[0] if (ang[0] - ang[1]) % (2 * math.pi) < math.pi else ids[1])
far = max(pendant, key=lambda i: math.hypot(p21["coords"][i][0] - 3.0, p21["coords"][i][1] - math.sqrt(3)))
dist2 = set(inner21) | set(outer) | {far}
assert len(dist1) == 9 and len(dist2) == 13
write_patch("kagome-21", 4.0, dist1)
dump(root / "species" / "kagome-21-I.json", {"patch": "kagome-21", "labels": species_from(21, dist1)})
dump(root / "species" / "kagome-21-II.json", {"patch": "kagome-21", "labels": species_from(21, dist2)})
dump(root / "subsets" / "kagome-21.json",
     {"patch": "kagome-21", "A": [15, 16, 17, 0, 1, 2], "B": [3, 4, 5, 6, 7, 8], "C": [18, 19, 20]})

p30 = load("kagome-30")
inner30 = set(hexagon_sites(p30, (3.0, math.sqrt(3)))) | set(hexagon_sites(p30, (7.0, math.sqrt(3))))
write_patch("kagome-30", 4.0, inner30)
dump(root / "subsets" / "kagome-30.json",
     {"patch": "kagome-30", "A": [15, 16, 17, 0, 1, 2], "B": [3, 4, 5, 6, 7, 8, 18, 19, 20],
      "C": [21, 22, 23, 24, 25, 26]})
print("inner12", inner12, "inner21", inner21, "dist2", sorted(dist2), "inner30", sorted(inner30))
