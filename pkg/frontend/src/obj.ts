// Minimal OBJ subset loader for custom preview meshes: v / vt / vn / f
// with arbitrary polygon faces (triangulated as fans).  Missing normals
// are computed per-vertex from face normals; missing uvs default to 0,0.

export interface MeshData {
  positions: Float32Array;
  normals: Float32Array;
  uvs: Float32Array;
  indices: Uint32Array;
}

export function parseObj(text: string): MeshData {
  const vs: number[][] = [];
  const vts: number[][] = [];
  const vns: number[][] = [];
  const faces: string[][] = [];

  for (const raw of text.split("\n")) {
    const line = raw.trim();
    if (line === "" || line.startsWith("#")) continue;
    const parts = line.split(/\s+/);
    const tag = parts[0];
    if (tag === "v" && parts.length >= 4) {
      vs.push([Number(parts[1]), Number(parts[2]), Number(parts[3])]);
    } else if (tag === "vt" && parts.length >= 3) {
      vts.push([Number(parts[1]), Number(parts[2])]);
    } else if (tag === "vn" && parts.length >= 4) {
      vns.push([Number(parts[1]), Number(parts[2]), Number(parts[3])]);
    } else if (tag === "f" && parts.length >= 4) {
      faces.push(parts.slice(1));
    }
  }
  if (vs.length === 0 || faces.length === 0) {
    throw new Error("OBJ has no geometry (need v and f statements)");
  }
  if (vs.some((v) => v.some((x) => !Number.isFinite(x)))) {
    throw new Error("OBJ contains non-numeric vertex data");
  }

  const positions: number[] = [];
  const uvs: number[] = [];
  const normals: number[] = [];
  const indices: number[] = [];
  const seen = new Map<string, number>();
  let needNormals = false;

  const resolve = (token: string): number => {
    const cached = seen.get(token);
    if (cached !== undefined) return cached;
    const [vi, ti, ni] = token.split("/").map((p) => (p === "" ? NaN : Number(p)));
    const v = vs[(vi < 0 ? vs.length + vi : vi - 1) | 0];
    if (v === undefined) throw new Error(`OBJ face references missing vertex ${token}`);
    const t = Number.isNaN(ti) ? undefined : vts[(ti < 0 ? vts.length + ti : ti - 1) | 0];
    const n = Number.isNaN(ni) ? undefined : vns[(ni < 0 ? vns.length + ni : ni - 1) | 0];
    const index = positions.length / 3;
    positions.push(v[0], v[1], v[2]);
    uvs.push(t ? t[0] : 0, t ? t[1] : 0);
    if (n) {
      normals.push(n[0], n[1], n[2]);
    } else {
      normals.push(0, 0, 0);
      needNormals = true;
    }
    seen.set(token, index);
    return index;
  };

  for (const face of faces) {
    const corner0 = resolve(face[0]);
    for (let i = 1; i + 1 < face.length; i++) {
      indices.push(corner0, resolve(face[i]), resolve(face[i + 1]));
    }
  }

  if (needNormals) {
    accumulateNormals(positions, indices, normals);
  }
  return {
    positions: new Float32Array(positions),
    normals: new Float32Array(normals),
    uvs: new Float32Array(uvs),
    indices: new Uint32Array(indices),
  };
}

function accumulateNormals(positions: number[], indices: number[], normals: number[]): void {
  for (let i = 0; i < normals.length; i++) normals[i] = 0;
  for (let f = 0; f < indices.length; f += 3) {
    const [a, b, c] = [indices[f] * 3, indices[f + 1] * 3, indices[f + 2] * 3];
    const ux = positions[b] - positions[a];
    const uy = positions[b + 1] - positions[a + 1];
    const uz = positions[b + 2] - positions[a + 2];
    const wx = positions[c] - positions[a];
    const wy = positions[c + 1] - positions[a + 1];
    const wz = positions[c + 2] - positions[a + 2];
    const nx = uy * wz - uz * wy;
    const ny = uz * wx - ux * wz;
    const nz = ux * wy - uy * wx;
    for (const base of [a, b, c]) {
      normals[base] += nx;
      normals[base + 1] += ny;
      normals[base + 2] += nz;
    }
  }
  for (let i = 0; i < normals.length; i += 3) {
    const len = Math.hypot(normals[i], normals[i + 1], normals[i + 2]);
    if (len > 1e-12) {
      normals[i] /= len;
      normals[i + 1] /= len;
      normals[i + 2] /= len;
    } else {
      normals[i + 2] = 1;
    }
  }
}
