// Built-in preview meshes.  All generators return indexed triangle meshes
// with positions, unit normals, and uvs matching the shader contract.

import type { MeshData } from "./obj";

export type { MeshData };

function pack(
  positions: number[],
  normals: number[],
  uvs: number[],
  indices: number[],
): MeshData {
  return {
    positions: new Float32Array(positions),
    normals: new Float32Array(normals),
    uvs: new Float32Array(uvs),
    indices: new Uint32Array(indices),
  };
}

export function sphere(radius = 1, stacks = 24, slices = 32): MeshData {
  const positions: number[] = [];
  const normals: number[] = [];
  const uvs: number[] = [];
  const indices: number[] = [];
  for (let i = 0; i <= stacks; i++) {
    const phi = (i / stacks) * Math.PI;
    for (let j = 0; j <= slices; j++) {
      const theta = (j / slices) * 2 * Math.PI;
      const nx = Math.sin(phi) * Math.cos(theta);
      const ny = Math.cos(phi);
      const nz = Math.sin(phi) * Math.sin(theta);
      positions.push(radius * nx, radius * ny, radius * nz);
      normals.push(nx, ny, nz);
      uvs.push(j / slices, 1 - i / stacks);
    }
  }
  const row = slices + 1;
  for (let i = 0; i < stacks; i++) {
    for (let j = 0; j < slices; j++) {
      const a = i * row + j;
      indices.push(a, a + row, a + 1, a + 1, a + row, a + row + 1);
    }
  }
  return pack(positions, normals, uvs, indices);
}

export function box(size = 1.4): MeshData {
  const h = size / 2;
  const faces: Array<{ n: number[]; corners: number[][] }> = [
    { n: [0, 0, 1], corners: [[-h, -h, h], [h, -h, h], [h, h, h], [-h, h, h]] },
    { n: [0, 0, -1], corners: [[h, -h, -h], [-h, -h, -h], [-h, h, -h], [h, h, -h]] },
    { n: [1, 0, 0], corners: [[h, -h, h], [h, -h, -h], [h, h, -h], [h, h, h]] },
    { n: [-1, 0, 0], corners: [[-h, -h, -h], [-h, -h, h], [-h, h, h], [-h, h, -h]] },
    { n: [0, 1, 0], corners: [[-h, h, h], [h, h, h], [h, h, -h], [-h, h, -h]] },
    { n: [0, -1, 0], corners: [[-h, -h, -h], [h, -h, -h], [h, -h, h], [-h, -h, h]] },
  ];
  const positions: number[] = [];
  const normals: number[] = [];
  const uvs: number[] = [];
  const indices: number[] = [];
  const corner_uv = [[0, 0], [1, 0], [1, 1], [0, 1]];
  for (const face of faces) {
    const base = positions.length / 3;
    face.corners.forEach((corner, k) => {
      positions.push(corner[0], corner[1], corner[2]);
      normals.push(face.n[0], face.n[1], face.n[2]);
      uvs.push(corner_uv[k][0], corner_uv[k][1]);
    });
    indices.push(base, base + 1, base + 2, base, base + 2, base + 3);
  }
  return pack(positions, normals, uvs, indices);
}

export function capsule(radius = 0.55, height = 1.1, stacks = 16, slices = 24): MeshData {
  // a sphere stretched along y between two hemispherical caps
  const positions: number[] = [];
  const normals: number[] = [];
  const uvs: number[] = [];
  const indices: number[] = [];
  const half = height / 2;
  const rows = stacks * 2 + 1;
  for (let i = 0; i <= rows; i++) {
    const t = i / rows;
    const phi = t * Math.PI;
    const upper = phi < Math.PI / 2;
    const offset = upper ? half : -half;
    const nx0 = Math.sin(phi);
    const ny = Math.cos(phi);
    for (let j = 0; j <= slices; j++) {
      const theta = (j / slices) * 2 * Math.PI;
      const nx = nx0 * Math.cos(theta);
      const nz = nx0 * Math.sin(theta);
      positions.push(radius * nx, radius * ny + offset, radius * nz);
      normals.push(nx, ny, nz);
      uvs.push(j / slices, 1 - t);
    }
  }
  const row = slices + 1;
  for (let i = 0; i < rows; i++) {
    for (let j = 0; j < slices; j++) {
      const a = i * row + j;
      indices.push(a, a + row, a + 1, a + 1, a + row, a + row + 1);
    }
  }
  return pack(positions, normals, uvs, indices);
}

export function plane(size = 8, uvRepeat = 8, y = -1.05): MeshData {
  const h = size / 2;
  return pack(
    [-h, y, -h, h, y, -h, h, y, h, -h, y, h],
    [0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0],
    [0, 0, uvRepeat, 0, uvRepeat, uvRepeat, 0, uvRepeat],
    [0, 2, 1, 0, 3, 2],
  );
}

export function quad(width: number, height: number): MeshData {
  // unit quad in the xy plane facing +z; positioned via model matrices
  const w = width / 2;
  const h = height / 2;
  return pack(
    [-w, -h, 0, w, -h, 0, w, h, 0, -w, h, 0],
    [0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1],
    [0, 0, 1, 0, 1, 1, 0, 1],
    [0, 1, 2, 0, 2, 3],
  );
}
