"""Reference semantics for the procedural noise nodes.

The lattice hash and all derived constants are part of the genome file
format (see docs/format.md): any reimplementation that uses the same
constants reproduces these values in double precision.

    hash21(p) = fract(sin(p.x*127.1 + p.y*311.7) * 43758.5453123)
    hash22(p) = (hash21 with (127.1, 311.7), hash21 with (269.5, 183.3))

All three generators take lattice coordinates derived from a 2D sample
point; interpolation uses the quintic fade t^3*(t*(t*6-15)+10).
"""

from __future__ import annotations

import math

HASH_DOT_A = (127.1, 311.7)
HASH_DOT_B = (269.5, 183.3)
HASH_SCALE = 43758.5453123

SIMPLE_NOISE_OCTAVES = ((1.0, 0.5), (2.0, 0.25), (4.0, 0.125))
SIMPLE_NOISE_NORM = 0.875
VORONOI_SENTINEL = 8.0


def _fract(x):
    return x - math.floor(x)


def _fade(t):
    return t * t * t * (t * (t * 6.0 - 15.0) + 10.0)


def _lerp(a, b, t):
    return a + t * (b - a)


def hash21(x, y):
    return _fract(math.sin(x * HASH_DOT_A[0] + y * HASH_DOT_A[1]) * HASH_SCALE)


def hash22(x, y):
    return (
        _fract(math.sin(x * HASH_DOT_A[0] + y * HASH_DOT_A[1]) * HASH_SCALE),
        _fract(math.sin(x * HASH_DOT_B[0] + y * HASH_DOT_B[1]) * HASH_SCALE),
    )


def value_noise(px, py):
    """Bilinear value noise over the unit lattice, output in [0, 1]."""
    ix, iy = math.floor(px), math.floor(py)
    fx, fy = px - ix, py - iy
    u, v = _fade(fx), _fade(fy)
    a = hash21(ix, iy)
    b = hash21(ix + 1.0, iy)
    c = hash21(ix, iy + 1.0)
    d = hash21(ix + 1.0, iy + 1.0)
    return _lerp(_lerp(a, b, u), _lerp(c, d, u), v)


def simple_noise(ux, uy, scale):
    """Three-octave value noise, frequencies (1, 2, 4), amplitudes (.5, .25, .125)."""
    total = 0.0
    for freq, amp in SIMPLE_NOISE_OCTAVES:
        total += amp * value_noise(ux * scale * freq, uy * scale * freq)
    return total / SIMPLE_NOISE_NORM


def _grad_dir(ix, iy):
    hx, hy = hash22(ix, iy)
    return (hx * 2.0 - 1.0, hy * 2.0 - 1.0)


def gradient_noise(ux, uy, scale):
    """Single-octave Perlin-style gradient noise remapped to roughly [0, 1]."""
    px, py = ux * scale, uy * scale
    ix, iy = math.floor(px), math.floor(py)
    fx, fy = px - ix, py - iy
    u, v = _fade(fx), _fade(fy)
    g00 = _grad_dir(ix, iy)
    g10 = _grad_dir(ix + 1.0, iy)
    g01 = _grad_dir(ix, iy + 1.0)
    g11 = _grad_dir(ix + 1.0, iy + 1.0)
    a = g00[0] * fx + g00[1] * fy
    b = g10[0] * (fx - 1.0) + g10[1] * fy
    c = g01[0] * fx + g01[1] * (fy - 1.0)
    d = g11[0] * (fx - 1.0) + g11[1] * (fy - 1.0)
    return _lerp(_lerp(a, b, u), _lerp(c, d, u), v) * 0.5 + 0.5


def voronoi(ux, uy, angle_offset, cell_density):
    """Nearest-feature search over the 3x3 cell neighbourhood.

    Returns (distance to nearest feature point, random id of its cell).
    Feature point of cell c: 0.5 + 0.5 * (sin(angle*h.x), cos(angle*h.y))
    with h = hash22(c).
    """
    px, py = ux * cell_density, uy * cell_density
    cx, cy = math.floor(px), math.floor(py)
    fx, fy = px - cx, py - cy
    best = VORONOI_SENTINEL
    best_cell = 0.0
    for dy in (-1.0, 0.0, 1.0):
        for dx in (-1.0, 0.0, 1.0):
            hx, hy = hash22(cx + dx, cy + dy)
            ox = 0.5 + 0.5 * math.sin(angle_offset * hx)
            oy = 0.5 + 0.5 * math.cos(angle_offset * hy)
            ddx = dx + ox - fx
            ddy = dy + oy - fy
            d = math.sqrt(ddx * ddx + ddy * ddy)
            if d < best:
                best = d
                best_cell = hx
    return best, best_cell


GLSL_HELPERS = """\
float sg_hash21(vec2 p) {
    float h = sin(dot(p, vec2(127.1, 311.7))) * 43758.5453123;
    return h - floor(h);
}
vec2 sg_hash22(vec2 p) {
    vec2 h = vec2(sin(dot(p, vec2(127.1, 311.7))), sin(dot(p, vec2(269.5, 183.3)))) * 43758.5453123;
    return h - floor(h);
}
float sg_value_noise(vec2 p) {
    vec2 i = floor(p);
    vec2 f = p - i;
    vec2 u = f * f * f * (f * (f * 6.0 - 15.0) + 10.0);
    float a = sg_hash21(i);
    float b = sg_hash21(i + vec2(1.0, 0.0));
    float c = sg_hash21(i + vec2(0.0, 1.0));
    float d = sg_hash21(i + vec2(1.0, 1.0));
    return mix(mix(a, b, u.x), mix(c, d, u.x), u.y);
}
float sg_simple_noise(vec2 uv, float scale) {
    return (0.5 * sg_value_noise(uv * scale)
        + 0.25 * sg_value_noise(uv * scale * 2.0)
        + 0.125 * sg_value_noise(uv * scale * 4.0)) / 0.875;
}
vec2 sg_grad_dir(vec2 cell) {
    return sg_hash22(cell) * 2.0 - 1.0;
}
float sg_gradient_noise(vec2 uv, float scale) {
    vec2 p = uv * scale;
    vec2 i = floor(p);
    vec2 f = p - i;
    vec2 u = f * f * f * (f * (f * 6.0 - 15.0) + 10.0);
    float a = dot(sg_grad_dir(i), f);
    float b = dot(sg_grad_dir(i + vec2(1.0, 0.0)), f - vec2(1.0, 0.0));
    float c = dot(sg_grad_dir(i + vec2(0.0, 1.0)), f - vec2(0.0, 1.0));
    float d = dot(sg_grad_dir(i + vec2(1.0, 1.0)), f - vec2(1.0, 1.0));
    return mix(mix(a, b, u.x), mix(c, d, u.x), u.y) * 0.5 + 0.5;
}
vec2 sg_voronoi(vec2 uv, float angleOffset, float cellDensity) {
    vec2 p = uv * cellDensity;
    vec2 cell = floor(p);
    vec2 f = p - cell;
    float best = 8.0;
    float bestCell = 0.0;
    for (int y = -1; y <= 1; y++) {
        for (int x = -1; x <= 1; x++) {
            vec2 g = vec2(float(x), float(y));
            vec2 h = sg_hash22(cell + g);
            vec2 off = vec2(0.5 + 0.5 * sin(angleOffset * h.x), 0.5 + 0.5 * cos(angleOffset * h.y));
            float d = length(g + off - f);
            if (d < best) { best = d; bestCell = h.x; }
        }
    }
    return vec2(best, bestCell);
}
"""
