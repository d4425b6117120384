import { describe, expect, it } from "vitest";

import { parseObj } from "../src/obj";

const TRIANGLE = `
# a single triangle with full attributes
v 0 0 0
v 1 0 0
v 0 1 0
vt 0 0
vt 1 0
vt 0 1
vn 0 0 1
f 1/1/1 2/2/1 3/3/1
`;

const QUAD_NO_NORMALS = `
v 0 0 0
v 1 0 0
v 1 1 0
v 0 1 0
f 1 2 3 4
`;

describe("parseObj", () => {
  it("parses v/vt/vn faces", () => {
    const mesh = parseObj(TRIANGLE);
    expect(mesh.positions.length).toBe(9);
    expect(mesh.uvs.length).toBe(6);
    expect(mesh.indices).toEqual(new Uint32Array([0, 1, 2]));
    expect([...mesh.normals.slice(0, 3)]).toEqual([0, 0, 1]);
  });

  it("triangulates polygons as fans", () => {
    const mesh = parseObj(QUAD_NO_NORMALS);
    expect(mesh.indices.length).toBe(6); // two triangles
    expect(mesh.indices[0]).toBe(0);
    expect(mesh.indices[3]).toBe(0);
  });

  it("computes unit normals when the file has none", () => {
    const mesh = parseObj(QUAD_NO_NORMALS);
    for (let i = 0; i < mesh.normals.length; i += 3) {
      const len = Math.hypot(mesh.normals[i], mesh.normals[i + 1], mesh.normals[i + 2]);
      expect(len).toBeCloseTo(1, 5);
      expect(mesh.normals[i + 2]).toBeCloseTo(1, 5); // planar quad in xy faces +z
    }
  });

  it("deduplicates identical face corners", () => {
    const mesh = parseObj(QUAD_NO_NORMALS);
    expect(mesh.positions.length / 3).toBe(4);
  });

  it("supports negative (relative) indices", () => {
    const mesh = parseObj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf -3 -2 -1\n");
    expect(mesh.indices).toEqual(new Uint32Array([0, 1, 2]));
  });

  it("rejects garbage input", () => {
    expect(() => parseObj("not an obj at all")).toThrow();
    expect(() => parseObj("v 1 2 3\n")).toThrow(); // vertices but no faces
    expect(() => parseObj("v a b c\nf 1 1 1\n")).toThrow(); // non-numeric
    expect(() => parseObj("v 0 0 0\nf 1 2 3\n")).toThrow(); // missing vertices
  });

  it("missing uvs default to zero", () => {
    const mesh = parseObj(QUAD_NO_NORMALS);
    expect([...mesh.uvs]).toEqual([0, 0, 0, 0, 0, 0, 0, 0]);
  });
});
