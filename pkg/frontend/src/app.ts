/**
 * Browser binder: wires the console client and the view layer into the
 * page. Expects a ws-to-tcp bridge in front of the session server (see
 * the README); everything below is display and input plumbing.
 */

import { ConsoleClient } from "./client.js";
import { WebSocketTransport } from "./transport.js";
import {
  panelModel,
  raiseAmountValid,
  renderActionPanel,
  renderErrorBanner,
  renderHelpBanner,
  renderTable,
  renderTicker,
} from "./view.js";

function byId(id: string): HTMLElement {
  const element = document.getElementById(id);
  if (!element) throw new Error(`missing #${id}`);
  return element;
}

export async function startConsole(url: string, sessionId: string): Promise<ConsoleClient> {
  const client = new ConsoleClient(new WebSocketTransport(url), sessionId);
  const repaint = () => {
    if (client.state) {
      byId("table").innerHTML = renderTable(client.state.public);
    }
    const panel = panelModel(client.state?.public ?? null, client.pendingAction);
    byId("panel").innerHTML = renderActionPanel(panel);
    byId("error").innerHTML = renderErrorBanner(client.lastError);
    byId("help").innerHTML = renderHelpBanner(client.helpRequest?.reason ?? null);
    byId("ticker").innerHTML = renderTicker(client.ticker);
    if (client.connectionLost) {
      byId("error").innerHTML = `<div class="banner error">connection lost</div>`;
    }

    byId("check").onclick = () => client.submitAction("check");
    byId("call").onclick = () => client.submitAction("call");
    byId("fold").onclick = () => client.submitAction("fold");
    byId("all-in").onclick = () => client.submitAction("all_in");
    byId("raise").onclick = () => {
      const amount = Number((byId("raise-amount") as HTMLInputElement).value);
      if (raiseAmountValid(amount, panel)) {
        client.submitAction(`raise(${amount})`);
      }
    };
    const ack = document.getElementById("help-ack");
    if (ack) ack.onclick = () => client.acknowledgeHelp();
  };

  client.onMessage(repaint);
  await client.join("opponent");
  repaint();
  return client;
}
