/**
 * Line-stream transports.
 *
 * The console core only needs a duplex stream of text lines. Node
 * environments (tests, terminal use) connect straight to the server's
 * TCP listener; browsers cannot open raw TCP sockets, so the WebSocket
 * transport expects a ws-to-tcp bridge forwarding lines verbatim.
 */

export interface LineTransport {
  connect(): Promise<void>;
  send(line: string): void;
  onLine(handler: (line: string) => void): void;
  onClose(handler: () => void): void;
  close(): void;
}

export class TcpTransport implements LineTransport {
  private socket: import("node:net").Socket | null = null;
  private lineHandler: (line: string) => void = () => {};
  private closeHandler: () => void = () => {};
  private buffer = "";

  constructor(private host: string, private port: number) {}

  async connect(): Promise<void> {
    const net = await import("node:net");
    await new Promise<void>((resolve, reject) => {
      const socket = net.createConnection({ host: this.host, port: this.port });
      socket.setEncoding("utf-8");
      socket.once("connect", () => {
        this.socket = socket;
        resolve();
      });
      socket.once("error", reject);
      socket.on("data", (chunk: string) => this.feed(chunk));
      socket.on("close", () => this.closeHandler());
    });
  }

  private feed(chunk: string): void {
    this.buffer += chunk;
    let index;
    while ((index = this.buffer.indexOf("\n")) >= 0) {
      const line = this.buffer.slice(0, index).trim();
      this.buffer = this.buffer.slice(index + 1);
      if (line) this.lineHandler(line);
    }
  }

  send(line: string): void {
    if (!this.socket) throw new Error("not connected");
    this.socket.write(line + "\n");
  }

  onLine(handler: (line: string) => void): void {
    this.lineHandler = handler;
  }

  onClose(handler: () => void): void {
    this.closeHandler = handler;
  }

  close(): void {
    this.socket?.end();
    this.socket = null;
  }
}

export class WebSocketTransport implements LineTransport {
  private socket: WebSocket | null = null;
  private lineHandler: (line: string) => void = () => {};
  private closeHandler: () => void = () => {};

  constructor(private url: string) {}

  connect(): Promise<void> {
    return new Promise((resolve, reject) => {
      const socket = new WebSocket(this.url);
      socket.onopen = () => {
        this.socket = socket;
        resolve();
      };
      socket.onerror = () => reject(new Error(`cannot reach ${this.url}`));
      socket.onmessage = (event) => {
        for (const line of String(event.data).split("\n")) {
          if (line.trim()) this.lineHandler(line.trim());
        }
      };
      socket.onclose = () => this.closeHandler();
    });
  }

  send(line: string): void {
    if (!this.socket) throw new Error("not connected");
    this.socket.send(line + "\n");
  }

  onLine(handler: (line: string) => void): void {
    this.lineHandler = handler;
  }

  onClose(handler: () => void): void {
    this.closeHandler = handler;
  }

  close(): void {
    this.socket?.close();
    this.socket = null;
  }
}
