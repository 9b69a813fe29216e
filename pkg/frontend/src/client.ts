/**
 * Console client: joins a session, keeps the latest table view, tracks
 * the outbound seq stream, and requests a resync on any gap. All
 * legality is server-authoritative; the client only forwards actions
 * and displays error codes verbatim.
 */

import {
  ErrorMessage,
  HandOver,
  HumanHelp,
  ServerMessage,
  StateUpdate,
  parseServerMessage,
} from "./protocol.js";
import { LineTransport } from "./transport.js";

export interface TickerEntry {
  seq: number;
  text: string;
}

export class ConsoleClient {
  state: StateUpdate | null = null;
  lastError: ErrorMessage | null = null;
  helpRequest: HumanHelp | null = null;
  handOver: HandOver | null = null;
  ticker: TickerEntry[] = [];
  resyncsRequested = 0;
  connectionLost = false;
  /** at most one outstanding action until the next state update */
  pendingAction: string | null = null;

  private lastSeq = 0;
  private listeners: ((msg: ServerMessage) => void)[] = [];

  constructor(
    private transport: LineTransport,
    readonly sessionId: string,
    private clientSeq = 0,
  ) {
    transport.onLine((line) => this.receive(line));
    transport.onClose(() => {
      this.connectionLost = true;
    });
  }

  async join(role: "opponent" | "observer" = "opponent"): Promise<void> {
    await this.transport.connect();
    this.connectionLost = false;
    this.sendMessage({ type: "join", role });
  }

  onMessage(listener: (msg: ServerMessage) => void): void {
    this.listeners.push(listener);
  }

  submitAction(actionLabel: string): void {
    this.pendingAction = actionLabel;
    this.sendMessage({ type: "opponent_action", action: actionLabel });
  }

  acknowledgeHelp(): void {
    this.helpRequest = null;
    this.sendMessage({ type: "human_help_ack" });
  }

  requestResync(): void {
    this.resyncsRequested += 1;
    this.sendMessage({ type: "resync", from_seq: this.lastSeq });
  }

  close(): void {
    this.transport.close();
  }

  private sendMessage(body: Record<string, unknown>): void {
    this.clientSeq += 1;
    this.transport.send(
      JSON.stringify({ session_id: this.sessionId, seq: this.clientSeq, ...body }),
    );
  }

  private receive(line: string): void {
    let msg: ServerMessage;
    try {
      msg = parseServerMessage(line);
    } catch {
      return; // not ours; ignore
    }
    if (msg.seq > 0) {
      if (this.lastSeq > 0 && msg.seq > this.lastSeq + 1) {
        this.requestResync();
      }
      this.lastSeq = Math.max(this.lastSeq, msg.seq);
    }
    switch (msg.type) {
      case "state_update":
        this.state = msg;
        this.pendingAction = null;
        this.pushTicker(msg.seq, `state ${msg.state_index}: ${msg.public.loop_stage}`);
        break;
      case "action_accepted":
        this.pushTicker(msg.seq, `accepted ${msg.action}`);
        break;
      case "error":
        this.lastError = msg;
        this.pendingAction = null;
        this.pushTicker(msg.seq, `${msg.code}: ${msg.message}`);
        break;
      case "human_help":
        this.helpRequest = msg;
        this.pushTicker(msg.seq, `help requested (${msg.reason ?? "unspecified"})`);
        break;
      case "hand_over":
        this.handOver = msg;
        this.pushTicker(msg.seq, `hand over: ${msg.outcome} (${msg.cause})`);
        break;
      case "joined":
        this.pushTicker(msg.seq, `joined as ${msg.role}`);
        break;
    }
    for (const listener of this.listeners) listener(msg);
  }

  private pushTicker(seq: number, text: string): void {
    this.ticker.push({ seq, text });
    if (this.ticker.length > 200) this.ticker.shift();
  }
}
