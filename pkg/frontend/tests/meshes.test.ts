import { describe, expect, it } from "vitest";

import { box, capsule, plane, quad, sphere } from "../src/meshes";
import type { MeshData } from "../src/obj";

function checkMesh(mesh: MeshData): void {
  const vertexCount = mesh.positions.length / 3;
  expect(mesh.normals.length).toBe(vertexCount * 3);
  expect(mesh.uvs.length).toBe(vertexCount * 2);
  expect(mesh.indices.length % 3).toBe(0);
  for (const index of mesh.indices) {
    expect(index).toBeLessThan(vertexCount);
  }
  for (let i = 0; i < mesh.normals.length; i += 3) {
    const len = Math.hypot(mesh.normals[i], mesh.normals[i + 1], mesh.normals[i + 2]);
    expect(len).toBeCloseTo(1, 4);
  }
}

describe("builtin meshes", () => {
  it("sphere is well-formed and on the radius", () => {
    const mesh = sphere(1, 12, 16);
    checkMesh(mesh);
    for (let i = 0; i < mesh.positions.length; i += 3) {
      const r = Math.hypot(mesh.positions[i], mesh.positions[i + 1], mesh.positions[i + 2]);
      expect(r).toBeCloseTo(1, 4);
    }
  });

  it("box is well-formed with 24 vertices and 12 triangles", () => {
    const mesh = box();
    checkMesh(mesh);
    expect(mesh.positions.length / 3).toBe(24);
    expect(mesh.indices.length / 3).toBe(12);
  });

  it("capsule is well-formed and taller than wide", () => {
    const mesh = capsule();
    checkMesh(mesh);
    let maxY = -Infinity;
    let maxX = -Infinity;
    for (let i = 0; i < mesh.positions.length; i += 3) {
      maxX = Math.max(maxX, Math.abs(mesh.positions[i]));
      maxY = Math.max(maxY, Math.abs(mesh.positions[i + 1]));
    }
    expect(maxY).toBeGreaterThan(maxX);
  });

  it("plane and quad are well-formed", () => {
    checkMesh(plane());
    checkMesh(quad(2, 2));
  });
});
