export interface UniformInfo {
  name: string;
  type: string;
  default: number[];
  role: "user-input" | "time" | "light";
}

export interface ShaderBundle {
  vertex: string;
  fragment: string;
  uniforms: UniformInfo[];
  lit: boolean;
  alphaClip: boolean;
}

export interface IndividualEntry {
  id: number;
  score: number;
  saved: boolean;
  born_generation: number;
  lit: boolean;
  uniforms: UniformInfo[];
}

export interface PopulationListing {
  generation: number;
  capacity: number;
  total: number;
  individuals: IndividualEntry[];
}

export interface BreedDelta {
  new_ids: number[];
  culled_ids: number[];
  generation: number;
}

export interface MutationConfigDoc {
  strength: "low" | "medium" | "high";
  mutation_count: number;
  expansion_enabled: boolean;
  expansion_probability: number;
}

export interface ConfigDoc {
  capacity: number;
  offspring_count: number;
  tournament_size: number;
  lit_probability: number;
  mutation: MutationConfigDoc;
  output_dir?: string;
  run_active?: boolean;
}

export type Score = -1 | 0 | 1;
