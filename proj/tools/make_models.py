#!/usr/bin/env python3
"""Writes the bundled low-poly robot meshes into data/models/.

bluerov2.obj   - frame, buoyancy tubes, electronics tube, six thrusters (uncolored)
turtlebot4.ply - round base, sensor tower, lidar puck (per-vertex colors)

Model frame: +x forward, +y left, +z up, meters.
"""
import math
import pathlib
import sys


class Mesh:
    def __init__(self):
        self.v = []
        self.c = []
        self.f = []

    def add_vertex(self, p, color):
        self.v.append(p)
        self.c.append(color)
        return len(self.v) - 1

    def box(self, center, size, color):
        cx, cy, cz = center
        sx, sy, sz = (s / 2 for s in size)
        idx = [self.add_vertex((cx + dx * sx, cy + dy * sy, cz + dz * sz), color)
               for dx in (-1, 1) for dy in (-1, 1) for dz in (-1, 1)]
        quads = [(0, 1, 3, 2), (4, 6, 7, 5), (0, 4, 5, 1), (2, 3, 7, 6), (0, 2, 6, 4), (1, 5, 7, 3)]
        for a, b, c, d in quads:
            self.f.append((idx[a], idx[b], idx[c]))
            self.f.append((idx[a], idx[c], idx[d]))

    def cylinder(self, center, axis, radius, length, color, segments=16):
        ax = [a / math.sqrt(sum(x * x for x in axis)) for a in axis]
        helper = (1, 0, 0) if abs(ax[0]) < 0.9 else (0, 1, 0)
        u = cross(ax, helper)
        u = [x / math.sqrt(sum(y * y for y in u)) for x in u]
        w = cross(ax, u)
        half = length / 2
        rings = []
        for s in (-half, half):
            ring = []
            for k in range(segments):
                t = 2 * math.pi * k / segments
                p = [center[i] + ax[i] * s + radius * (math.cos(t) * u[i] + math.sin(t) * w[i])
                     for i in range(3)]
                ring.append(self.add_vertex(tuple(p), color))
            rings.append(ring)
        caps = [self.add_vertex(tuple(center[i] + ax[i] * s for i in range(3)), color)
                for s in (-half, half)]
        for k in range(segments):
            n = (k + 1) % segments
            a, b = rings[0][k], rings[0][n]
            c, d = rings[1][n], rings[1][k]
            self.f.append((a, b, c))
            self.f.append((a, c, d))
            self.f.append((caps[0], b, a))
            self.f.append((caps[1], rings[1][k], rings[1][n]))


def cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def bluerov2():
    m = Mesh()
    gray = (90, 90, 100)
    m.box((0, 0.13, 0), (0.46, 0.01, 0.25), gray)
    m.box((0, -0.13, 0), (0.46, 0.01, 0.25), gray)
    m.cylinder((0, 0.08, 0.09), (1, 0, 0), 0.045, 0.40, gray)
    m.cylinder((0, -0.08, 0.09), (1, 0, 0), 0.045, 0.40, gray)
    m.cylinder((0.02, 0, -0.03), (1, 0, 0), 0.055, 0.30, gray)
    for x, y in ((0.17, 0.15), (0.17, -0.15), (-0.17, 0.15), (-0.17, -0.15)):
        axis = (1, 1 if y > 0 else -1, 0) if x > 0 else (1, -1 if y > 0 else 1, 0)
        m.cylinder((x, y, -0.06), axis, 0.05, 0.06, gray)
    for y in (0.1, -0.1):
        m.cylinder((0, y, 0.0), (0, 0, 1), 0.05, 0.06, gray)
    return m


def turtlebot4():
    m = Mesh()
    m.cylinder((0, 0, 0.05), (0, 0, 1), 0.171, 0.10, (40, 40, 45), segments=32)
    m.cylinder((0, 0, 0.12), (0, 0, 1), 0.16, 0.01, (230, 230, 235), segments=32)
    for x, y in ((0.08, 0.08), (0.08, -0.08), (-0.08, 0.08), (-0.08, -0.08)):
        m.cylinder((x, y, 0.2), (0, 0, 1), 0.008, 0.16, (60, 60, 60), segments=8)
    m.cylinder((0, 0, 0.28), (0, 0, 1), 0.16, 0.01, (230, 230, 235), segments=32)
    m.cylinder((0.02, 0, 0.31), (0, 0, 1), 0.035, 0.05, (20, 20, 20), segments=16)
    m.box((0.14, 0, 0.25), (0.03, 0.09, 0.03), (200, 30, 30))
    return m


def write_obj(mesh, path):
    with open(path, "w") as f:
        f.write("# BlueROV2-style low-poly hull\n")
        for x, y, z in mesh.v:
            f.write(f"v {x:.6f} {y:.6f} {z:.6f}\n")
        for a, b, c in mesh.f:
            f.write(f"f {a + 1} {b + 1} {c + 1}\n")


def write_ply(mesh, path):
    with open(path, "w") as f:
        f.write("ply\nformat ascii 1.0\ncomment TurtleBot4-style low-poly body\n")
        f.write(f"element vertex {len(mesh.v)}\n")
        f.write("property float x\nproperty float y\nproperty float z\n")
        f.write("property uchar red\nproperty uchar green\nproperty uchar blue\n")
        f.write(f"element face {len(mesh.f)}\nproperty list uchar int vertex_indices\nend_header\n")
        for (x, y, z), (r, g, b) in zip(mesh.v, mesh.c):
            f.write(f"{x:.6f} {y:.6f} {z:.6f} {r} {g} {b}\n")
        for a, b, c in mesh.f:
            f.write(f"3 {a} {b} {c}\n")


if __name__ == "__main__":
    out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "data/models")
    out.mkdir(parents=True, exist_ok=True)
    write_obj(bluerov2(), out / "bluerov2.obj")
    write_ply(turtlebot4(), out / "turtlebot4.ply")
