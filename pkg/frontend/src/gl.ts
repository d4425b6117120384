// WebGL2 plumbing: program compilation against the shaderevo bundle
// contract, mesh upload, and the per-tile renderer with an orbit camera.
// A shader that fails to compile overlays its driver log instead of
// crashing the grid.

import { identity, OrbitCamera, type Mat4 } from "./camera";
import type { MeshData } from "./obj";
import { SCENE_DEFS } from "./scenes";
import type { SceneId } from "./state";
import type { ShaderBundle } from "./types";

export type CompileResult =
  | { ok: true; program: WebGLProgram }
  | { ok: false; log: string };

export function compileProgram(
  gl: WebGL2RenderingContext,
  vertexSrc: string,
  fragmentSrc: string,
): CompileResult {
  const make = (type: number, src: string): WebGLShader | string => {
    const shader = gl.createShader(type)!;
    gl.shaderSource(shader, src);
    gl.compileShader(shader);
    if (!gl.getShaderParameter(shader, gl.COMPILE_STATUS)) {
      const log = gl.getShaderInfoLog(shader) ?? "unknown shader error";
      gl.deleteShader(shader);
      return log;
    }
    return shader;
  };
  const vs = make(gl.VERTEX_SHADER, vertexSrc);
  if (typeof vs === "string") return { ok: false, log: vs };
  const fs = make(gl.FRAGMENT_SHADER, fragmentSrc);
  if (typeof fs === "string") {
    gl.deleteShader(vs);
    return { ok: false, log: fs };
  }
  const program = gl.createProgram()!;
  gl.attachShader(program, vs);
  gl.attachShader(program, fs);
  gl.bindAttribLocation(program, 0, "a_position");
  gl.bindAttribLocation(program, 1, "a_normal");
  gl.bindAttribLocation(program, 2, "a_uv");
  gl.linkProgram(program);
  gl.deleteShader(vs);
  gl.deleteShader(fs);
  if (!gl.getProgramParameter(program, gl.LINK_STATUS)) {
    const log = gl.getProgramInfoLog(program) ?? "link failed";
    gl.deleteProgram(program);
    return { ok: false, log };
  }
  return { ok: true, program };
}

interface GpuMesh {
  vao: WebGLVertexArrayObject;
  count: number;
}

export function uploadMesh(gl: WebGL2RenderingContext, mesh: MeshData): GpuMesh {
  const vao = gl.createVertexArray()!;
  gl.bindVertexArray(vao);
  const attach = (loc: number, data: Float32Array, size: number) => {
    const buf = gl.createBuffer()!;
    gl.bindBuffer(gl.ARRAY_BUFFER, buf);
    gl.bufferData(gl.ARRAY_BUFFER, data, gl.STATIC_DRAW);
    gl.enableVertexAttribArray(loc);
    gl.vertexAttribPointer(loc, size, gl.FLOAT, false, 0, 0);
  };
  attach(0, mesh.positions, 3);
  attach(1, mesh.normals, 3);
  attach(2, mesh.uvs, 2);
  const ibo = gl.createBuffer()!;
  gl.bindBuffer(gl.ELEMENT_ARRAY_BUFFER, ibo);
  gl.bufferData(gl.ELEMENT_ARRAY_BUFFER, mesh.indices, gl.STATIC_DRAW);
  gl.bindVertexArray(null);
  return { vao, count: mesh.indices.length };
}

const ENV_VERTEX = `#version 300 es
in vec3 a_position;
in vec3 a_normal;
in vec2 a_uv;
uniform mat4 u_model;
uniform mat4 u_viewProj;
out vec3 v_normal;
out vec2 v_uv;
void main() {
    v_normal = mat3(u_model) * a_normal;
    v_uv = a_uv;
    gl_Position = u_viewProj * (u_model * vec4(a_position, 1.0));
}
`;

const ENV_FRAGMENT = `#version 300 es
precision highp float;
in vec3 v_normal;
in vec2 v_uv;
uniform vec3 u_color;
uniform vec3 u_lightDir;
uniform float u_checker;
out vec4 fragColor;
void main() {
    float check = mod(floor(v_uv.x) + floor(v_uv.y), 2.0);
    vec3 base = mix(u_color, u_color * 0.25, check * u_checker);
    float diff = max(dot(normalize(v_normal), normalize(u_lightDir)), 0.0);
    fragColor = vec4(base * (0.25 + 0.75 * diff), 1.0);
}
`;

export class TileRenderer {
  readonly canvas: HTMLCanvasElement;
  readonly camera = new OrbitCamera();
  private gl: WebGL2RenderingContext;
  private program: WebGLProgram | null = null;
  private uniformDefaults: Array<{ name: string; value: number[] }> = [];
  private envProgram: WebGLProgram;
  private mesh: GpuMesh | null = null;
  private envMeshes: Array<{ gpu: GpuMesh; model: Mat4; color: number[]; checker: boolean }> = [];
  private scene: SceneId = "LightedSphere";
  private model: Mat4 = identity();
  onError: (log: string | null) => void = () => {};

  constructor(canvas: HTMLCanvasElement) {
    this.canvas = canvas;
    const gl = canvas.getContext("webgl2");
    if (!gl) throw new Error("WebGL2 is not available");
    this.gl = gl;
    const env = compileProgram(gl, ENV_VERTEX, ENV_FRAGMENT);
    if (!env.ok) throw new Error(`builtin shader failed: ${env.log}`);
    this.envProgram = env.program;
    this.attachOrbitControls();
  }

  private attachOrbitControls(): void {
    let dragging = false;
    let lastX = 0;
    let lastY = 0;
    this.canvas.addEventListener("mousedown", (e) => {
      dragging = true;
      lastX = e.clientX;
      lastY = e.clientY;
    });
    window.addEventListener("mouseup", () => {
      dragging = false;
    });
    window.addEventListener("mousemove", (e) => {
      if (!dragging) return;
      this.camera.rotate(e.clientX - lastX, e.clientY - lastY);
      lastX = e.clientX;
      lastY = e.clientY;
    });
    this.canvas.addEventListener("wheel", (e) => {
      e.preventDefault();
      this.camera.zoom(e.deltaY);
    });
  }

  setBundle(bundle: ShaderBundle): void {
    if (this.program) this.gl.deleteProgram(this.program);
    this.program = null;
    const result = compileProgram(this.gl, bundle.vertex, bundle.fragment);
    if (!result.ok) {
      this.onError(result.log);
      return;
    }
    this.onError(null);
    this.program = result.program;
    this.uniformDefaults = bundle.uniforms
      .filter((u) => u.role === "user-input")
      .map((u) => ({ name: u.name, value: u.default }));
  }

  setMesh(mesh: MeshData): void {
    this.mesh = uploadMesh(this.gl, mesh);
  }

  setScene(scene: SceneId): void {
    this.scene = scene;
    this.envMeshes = SCENE_DEFS[scene].env().map((obj) => ({
      gpu: uploadMesh(this.gl, obj.mesh),
      model: obj.model,
      color: obj.color,
      checker: obj.checker,
    }));
  }

  private setVec(program: WebGLProgram, name: string, value: number[]): void {
    const loc = this.gl.getUniformLocation(program, name);
    if (loc === null) return;
    const gl = this.gl;
    if (value.length === 1) gl.uniform1f(loc, value[0]);
    else if (value.length === 2) gl.uniform2fv(loc, value);
    else if (value.length === 3) gl.uniform3fv(loc, value);
    else gl.uniform4fv(loc, value);
  }

  frame(timeSec: number): void {
    const gl = this.gl;
    const def = SCENE_DEFS[this.scene];
    const light = def.light(timeSec);
    const aspect = this.canvas.width / Math.max(this.canvas.height, 1);
    const viewProj = this.camera.viewProj(aspect);
    gl.viewport(0, 0, this.canvas.width, this.canvas.height);
    gl.clearColor(def.background[0], def.background[1], def.background[2], 1);
    gl.enable(gl.DEPTH_TEST);
    gl.clear(gl.COLOR_BUFFER_BIT | gl.DEPTH_BUFFER_BIT);

    gl.useProgram(this.envProgram);
    for (const env of this.envMeshes) {
      gl.uniformMatrix4fv(gl.getUniformLocation(this.envProgram, "u_model"), false, env.model);
      gl.uniformMatrix4fv(gl.getUniformLocation(this.envProgram, "u_viewProj"), false, viewProj);
      this.setVec(this.envProgram, "u_color", env.color);
      this.setVec(this.envProgram, "u_lightDir", light.dir);
      this.setVec(this.envProgram, "u_checker", [env.checker ? 1 : 0]);
      gl.bindVertexArray(env.gpu.vao);
      gl.drawElements(gl.TRIANGLES, env.gpu.count, gl.UNSIGNED_INT, 0);
    }

    if (!this.program || !this.mesh) return;
    gl.useProgram(this.program);
    gl.uniformMatrix4fv(gl.getUniformLocation(this.program, "u_model"), false, this.model);
    gl.uniformMatrix4fv(gl.getUniformLocation(this.program, "u_viewProj"), false, viewProj);
    this.setVec(this.program, "u_time", [timeSec]);
    this.setVec(this.program, "u_lightDir", light.dir);
    this.setVec(this.program, "u_lightColor", light.color);
    this.setVec(this.program, "u_viewDir", this.camera.viewDir());
    for (const u of this.uniformDefaults) {
      this.setVec(this.program, u.name, u.value);
    }
    gl.bindVertexArray(this.mesh.vao);
    gl.drawElements(gl.TRIANGLES, this.mesh.count, gl.UNSIGNED_INT, 0);
    gl.bindVertexArray(null);
  }
}
