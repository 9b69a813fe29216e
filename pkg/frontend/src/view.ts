/**
 * Pure view layer: render functions from server state to HTML strings,
 * plus the action-panel gating logic. No DOM access here, so the whole
 * layer is unit-testable headlessly; app.ts binds the strings into the
 * page.
 */

import {
  ChipMap,
  DENOMINATIONS,
  ErrorMessage,
  HoleSlot,
  PublicState,
  chipValue,
} from "./protocol.js";

export class HiddenCardLeak extends Error {}

/** The server must never reveal a face-down or held robot card. */
export function assertNoHiddenLeaks(state: PublicState): void {
  for (const slot of state.robot_hole) {
    if (slot && slot.facing !== "up" && slot.card !== null) {
      throw new HiddenCardLeak(`robot ${slot.facing} card leaked: ${slot.card}`);
    }
  }
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function chipCells(map: ChipMap): string {
  const cells = DENOMINATIONS.map((d) => `<span class="chip c${d}">${d}×${map[d]}</span>`);
  return `${cells.join(" ")} <b class="value">(${chipValue(map)})</b>`;
}

function cardSpan(card: string | null, facing?: string): string {
  if (card === null || card === undefined) {
    return `<span class="card back">${facing === "in_hand" ? "held" : "⬢"}</span>`;
  }
  const suit = card.slice(-1);
  const red = suit === "H" || suit === "D" ? " red" : "";
  return `<span class="card${red}">${escapeHtml(card)}</span>`;
}

function holeRow(slots: (HoleSlot | null)[]): string {
  return slots
    .map((slot) => (slot ? cardSpan(slot.card, slot.facing) : `<span class="card empty"></span>`))
    .join(" ");
}

export function renderTable(state: PublicState): string {
  assertNoHiddenLeaks(state);
  const turn = state.is_robot_turn ? "robot to act" : "your turn";
  const scene = state.scene_stable ? "stable" : "settling";
  return [
    `<div class="badges">`,
    `<span class="badge stage">${escapeHtml(state.loop_stage)}</span>`,
    `<span class="badge street">${escapeHtml(state.street)}</span>`,
    `<span class="badge turn">${turn}</span>`,
    `<span class="badge scene">${scene}</span>`,
    `<span class="badge blind">robot: ${escapeHtml(state.robot_blind)}</span>`,
    `</div>`,
    `<div class="row opponent">`,
    `<div class="holes">${holeRow(state.opponent_hole)}</div>`,
    `<div class="chips">stack ${chipCells(state.opponent_inventory)}</div>`,
    `<div class="chips">bet ${chipCells(state.opponent_bet)}</div>`,
    `</div>`,
    `<div class="row board">board: ${
      state.community_cards.length
        ? state.community_cards.map((c) => cardSpan(c)).join(" ")
        : "<i>none</i>"
    }</div>`,
    `<div class="row pot">pot ${chipValue(state.robot_bet) + chipValue(state.opponent_bet)}</div>`,
    `<div class="row robot">`,
    `<div class="holes">${holeRow(state.robot_hole)}</div>`,
    `<div class="chips">stack ${chipCells(state.robot_inventory)}</div>`,
    `<div class="chips">bet ${chipCells(state.robot_bet)}</div>`,
    `</div>`,
  ].join("\n");
}

export interface PanelModel {
  enabled: boolean;
  canCheck: boolean;
  canCall: boolean;
  maxRaise: number;
}

const BETTING_STREETS = new Set(["preflop", "flop", "turn", "river"]);

/**
 * Action-panel gating. Enabled only when the server reports the
 * opponent's turn with no action in flight; raise inputs are
 * pre-filtered for UX only — the server stays authoritative.
 */
export function panelModel(state: PublicState | null, pendingAction: string | null): PanelModel {
  if (!state || pendingAction !== null) {
    return { enabled: false, canCheck: false, canCall: false, maxRaise: 0 };
  }
  const enabled = !state.is_robot_turn && BETTING_STREETS.has(state.street);
  const owed = chipValue(state.robot_bet) - chipValue(state.opponent_bet);
  return {
    enabled,
    canCheck: enabled && owed <= 0,
    canCall: enabled && owed > 0,
    maxRaise: enabled ? chipValue(state.opponent_inventory) : 0,
  };
}

/** Raise amounts are restricted to multiples of 5 within the stack. */
export function raiseAmountValid(amount: number, panel: PanelModel): boolean {
  return (
    panel.enabled &&
    Number.isInteger(amount) &&
    amount > 0 &&
    amount % 5 === 0 &&
    amount <= panel.maxRaise
  );
}

export function renderActionPanel(panel: PanelModel): string {
  const disabled = panel.enabled ? "" : " disabled";
  return [
    `<button id="check"${panel.canCheck ? "" : " disabled"}>check</button>`,
    `<button id="call"${panel.canCall ? "" : " disabled"}>call</button>`,
    `<input id="raise-amount" type="number" step="5" min="5" max="${panel.maxRaise}"${disabled}>`,
    `<button id="raise"${disabled}>raise</button>`,
    `<button id="all-in"${disabled}>all in</button>`,
    `<button id="fold"${disabled}>fold</button>`,
  ].join("\n");
}

/** Error codes and messages are shown verbatim. */
export function renderErrorBanner(error: ErrorMessage | null): string {
  if (!error) return "";
  return `<div class="banner error"><b>${escapeHtml(error.code)}</b>: ${escapeHtml(
    error.message,
  )}</div>`;
}

export function renderHelpBanner(reason: string | null): string {
  if (reason === null) return "";
  return [
    `<div class="banner help">`,
    `robot needs help (${escapeHtml(reason)})`,
    `<button id="help-ack">resume</button>`,
    `</div>`,
  ].join(" ");
}

export function renderTicker(entries: { seq: number; text: string }[]): string {
  const items = entries
    .slice(-12)
    .map((e) => `<li>#${e.seq} ${escapeHtml(e.text)}</li>`)
    .join("");
  return `<ul class="ticker">${items}</ul>`;
}
