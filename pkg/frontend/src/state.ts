// Grid state is a pure function of the last population snapshot plus the
// pending deltas; every transition here returns a new state object so the
// UI can re-render from scratch after any action (or a hard refresh).

import type { IndividualEntry, PopulationListing } from "./types";

export const SCENES = [
  "LightedSphere",
  "CornellBox",
  "DarkRoomMovingLight",
  "CheckerboardGround",
] as const;
export type SceneId = (typeof SCENES)[number];

export const BUILTIN_MESHES = ["sphere", "box", "capsule"] as const;
export type MeshChoice = (typeof BUILTIN_MESHES)[number] | "custom";

export const PER_PAGE_CHOICES = [2, 4, 8] as const;

export interface TileView {
  entry: IndividualEntry;
  scene: SceneId;
  mesh: MeshChoice;
  selected: boolean;
  newborn: boolean;
}

export interface TileSettings {
  scene: SceneId;
  mesh: MeshChoice;
}

export interface GridState {
  generation: number;
  capacity: number;
  total: number;
  page: number;
  perPage: number;
  entries: IndividualEntry[];
  selected: number[]; // at most two ids, for manual breeding
  newborn: number[]; // badge the latest offspring
  settings: Record<number, TileSettings>; // persists across polling refreshes
}

export function emptyGrid(perPage: number = 4): GridState {
  return {
    generation: 0,
    capacity: 0,
    total: 0,
    page: 0,
    perPage,
    entries: [],
    selected: [],
    newborn: [],
    settings: {},
  };
}

export function pageCount(total: number, perPage: number): number {
  return Math.max(1, Math.ceil(total / perPage));
}

export function applyListing(state: GridState, listing: PopulationListing): GridState {
  const ids = new Set(listing.individuals.map((e) => e.id));
  const settings: Record<number, TileSettings> = {};
  for (const [key, value] of Object.entries(state.settings)) {
    if (ids.has(Number(key))) settings[Number(key)] = value;
  }
  return {
    ...state,
    generation: listing.generation,
    capacity: listing.capacity,
    total: listing.total,
    entries: listing.individuals,
    selected: state.selected.filter((id) => ids.has(id)),
    newborn: state.newborn.filter((id) => ids.has(id)),
    settings,
  };
}

export function applyBreedDelta(state: GridState, newIds: number[]): GridState {
  return { ...state, newborn: newIds.slice(), selected: [] };
}

export function toggleSelection(state: GridState, id: number): GridState {
  if (state.selected.includes(id)) {
    return { ...state, selected: state.selected.filter((s) => s !== id) };
  }
  if (state.selected.length >= 2) {
    return state; // at most two tiles may be selected for manual breeding
  }
  return { ...state, selected: [...state.selected, id] };
}

export function selectedPair(state: GridState): [number, number] | null {
  return state.selected.length === 2
    ? [state.selected[0], state.selected[1]]
    : null;
}

export function setScore(state: GridState, id: number, score: number): GridState {
  return {
    ...state,
    entries: state.entries.map((e) => (e.id === id ? { ...e, score } : e)),
  };
}

export function setSaved(state: GridState, id: number): GridState {
  return {
    ...state,
    entries: state.entries.map((e) => (e.id === id ? { ...e, saved: true } : e)),
  };
}

export function tileSettings(state: GridState, id: number): TileSettings {
  return state.settings[id] ?? { scene: "LightedSphere", mesh: "sphere" };
}

export function setTileScene(state: GridState, id: number, scene: SceneId): GridState {
  const current = tileSettings(state, id);
  return { ...state, settings: { ...state.settings, [id]: { ...current, scene } } };
}

export function setTileMesh(state: GridState, id: number, mesh: MeshChoice): GridState {
  const current = tileSettings(state, id);
  return { ...state, settings: { ...state.settings, [id]: { ...current, mesh } } };
}

export function setPage(state: GridState, page: number): GridState {
  const pages = pageCount(state.total, state.perPage);
  return { ...state, page: Math.min(Math.max(page, 0), pages - 1) };
}

export function setPerPage(state: GridState, perPage: number): GridState {
  if (!PER_PAGE_CHOICES.includes(perPage as (typeof PER_PAGE_CHOICES)[number])) {
    return state;
  }
  const next = { ...state, perPage };
  return setPage(next, Math.min(state.page, pageCount(state.total, perPage) - 1));
}

export function tiles(state: GridState): TileView[] {
  return state.entries.map((entry) => ({
    entry,
    ...tileSettings(state, entry.id),
    selected: state.selected.includes(entry.id),
    newborn: state.newborn.includes(entry.id),
  }));
}
