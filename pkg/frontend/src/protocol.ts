/**
 * Wire protocol types for the session server.
 *
 * Messages are newline-delimited JSON documents; every message carries
 * type, session_id, and seq. See ../../docs/wire-protocol.md for the
 * field-by-field contract.
 */

export interface ChipMap {
  "5": number;
  "10": number;
  "50": number;
  "100": number;
}

export interface HoleSlot {
  card: string | null;
  facing: string;
}

export interface PublicState {
  loop_stage: string;
  street: string;
  showdown_outcome: string;
  robot_blind: string;
  is_robot_turn: boolean;
  scene_stable: boolean;
  community_cards: string[];
  robot_inventory: ChipMap;
  opponent_inventory: ChipMap;
  robot_bet: ChipMap;
  opponent_bet: ChipMap;
  robot_hole: (HoleSlot | null)[];
  opponent_hole: (HoleSlot | null)[];
}

export interface StateUpdate {
  type: "state_update";
  session_id: string;
  seq: number;
  state_index: number;
  public: PublicState;
}

export interface Joined {
  type: "joined";
  session_id: string;
  seq: number;
  role: string;
}

export interface ActionAccepted {
  type: "action_accepted";
  session_id: string;
  seq: number;
  action: string;
}

export interface HumanHelp {
  type: "human_help";
  session_id: string;
  seq: number;
  reason: string | null;
}

export interface HandOver {
  type: "hand_over";
  session_id: string;
  seq: number;
  outcome: string | null;
  cause: string;
}

export interface ErrorMessage {
  type: "error";
  session_id: string | null;
  seq: number;
  code: string;
  message: string;
}

export type ServerMessage =
  | StateUpdate
  | Joined
  | ActionAccepted
  | HumanHelp
  | HandOver
  | ErrorMessage;

export const DENOMINATIONS = ["100", "50", "10", "5"] as const;

/** Display summation of a server-sent chip map; the client does no
 * other game arithmetic. */
export function chipValue(map: ChipMap): number {
  return 5 * map["5"] + 10 * map["10"] + 50 * map["50"] + 100 * map["100"];
}

export function parseServerMessage(line: string): ServerMessage {
  const doc = JSON.parse(line);
  if (typeof doc !== "object" || doc === null || typeof doc.type !== "string") {
    throw new Error(`not a server message: ${line}`);
  }
  return doc as ServerMessage;
}
