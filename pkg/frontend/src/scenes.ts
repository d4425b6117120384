// The four preview scenarios.  Each scene contributes a background color,
// a (possibly animated) directional light for the evolved shader's
// contract, and static environment geometry rendered with the built-in
// lambert shader.

import { identity, multiply, rotationX, rotationY, translation, type Mat4 } from "./camera";
import { plane, quad, type MeshData } from "./meshes";
import type { SceneId } from "./state";

export interface LightSample {
  dir: [number, number, number];
  color: [number, number, number];
}

export interface EnvObject {
  mesh: MeshData;
  model: Mat4;
  color: [number, number, number];
  checker: boolean;
}

export interface SceneDef {
  id: SceneId;
  background: [number, number, number];
  light(timeSec: number): LightSample;
  env(): EnvObject[];
}

function normalize3(v: [number, number, number]): [number, number, number] {
  const len = Math.hypot(v[0], v[1], v[2]) || 1;
  return [v[0] / len, v[1] / len, v[2] / len];
}

export const FIXED_KEY_LIGHT = normalize3([1, 1, 1]);

// Cornell box: two colored side walls, white back/floor/ceiling, and an
// area light on the ceiling approximated by three point lights.
export const CORNELL_LIGHT_POINTS: Array<[number, number, number]> = [
  [-0.7, 2.2, 0.2],
  [0.0, 2.2, -0.3],
  [0.7, 2.2, 0.2],
];

export function cornellEffectiveLight(
  target: [number, number, number] = [0, 0, 0],
): LightSample {
  let dx = 0;
  let dy = 0;
  let dz = 0;
  for (const p of CORNELL_LIGHT_POINTS) {
    const toLight = normalize3([p[0] - target[0], p[1] - target[1], p[2] - target[2]]);
    dx += toLight[0];
    dy += toLight[1];
    dz += toLight[2];
  }
  const n = CORNELL_LIGHT_POINTS.length;
  return {
    dir: normalize3([dx / n, dy / n, dz / n]),
    color: [1.0, 0.95, 0.85],
  };
}

export const MOVING_LIGHT_PERIOD_SEC = 6;

export function movingLightDir(timeSec: number): [number, number, number] {
  const angle = (timeSec / MOVING_LIGHT_PERIOD_SEC) * Math.PI * 2;
  return normalize3([Math.cos(angle), 0.55, Math.sin(angle)]);
}

function cornellEnv(): EnvObject[] {
  const wall = quad(4.4, 4.4);
  const d = 2.2;
  const place = (m: Mat4): Mat4 => m;
  return [
    { mesh: wall, model: place(multiply(translation(0, 0, -d), identity())), color: [0.85, 0.85, 0.85], checker: false },
    { mesh: wall, model: multiply(translation(-d, 0, 0), rotationY(Math.PI / 2)), color: [0.8, 0.15, 0.15], checker: false },
    { mesh: wall, model: multiply(translation(d, 0, 0), rotationY(-Math.PI / 2)), color: [0.15, 0.8, 0.15], checker: false },
    { mesh: wall, model: multiply(translation(0, -d, 0), rotationX(-Math.PI / 2)), color: [0.85, 0.85, 0.85], checker: false },
    { mesh: wall, model: multiply(translation(0, d, 0), rotationX(Math.PI / 2)), color: [0.85, 0.85, 0.85], checker: false },
  ];
}

export const SCENE_DEFS: Record<SceneId, SceneDef> = {
  LightedSphere: {
    id: "LightedSphere",
    background: [0.13, 0.14, 0.16],
    light: () => ({ dir: FIXED_KEY_LIGHT, color: [1, 1, 1] }),
    env: () => [],
  },
  CornellBox: {
    id: "CornellBox",
    background: [0.02, 0.02, 0.02],
    light: () => cornellEffectiveLight(),
    env: cornellEnv,
  },
  DarkRoomMovingLight: {
    id: "DarkRoomMovingLight",
    background: [0.01, 0.01, 0.02],
    light: (t) => ({ dir: movingLightDir(t), color: [0.9, 0.9, 1.0] }),
    env: () => [],
  },
  CheckerboardGround: {
    id: "CheckerboardGround",
    background: [0.5, 0.62, 0.8],
    light: () => ({ dir: FIXED_KEY_LIGHT, color: [1, 1, 1] }),
    env: () => [
      { mesh: plane(10, 10), model: identity(), color: [0.9, 0.9, 0.9], checker: true },
    ],
  },
};
