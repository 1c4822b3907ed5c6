#!/usr/bin/env python3
"""Generates the sized corpus models (redundant memory, N-modular redundancy).

The majority guards grow combinatorially with the replication factor, so the
sized models are generated rather than written by hand. Output goes to
corpus/ next to this script's repository root.
"""

import itertools
import os

ROOT = os.path.join(os.path.dirname(__file__), "..", "corpus")


def majority(literals):
    """Disjunction over all minimal majorities of the given literals."""
    k = len(literals) // 2 + 1
    terms = []
    for combo in itertools.combinations(literals, k):
        terms.append(" && ".join(combo))
    if len(terms) == 1:
        return terms[0]
    return " || ".join(f"({t})" for t in terms)


def write(name, text):
    path = os.path.join(ROOT, name)
    with open(path, "w") as f:
        f.write(text)
    print(f"wrote {path}")


def memory(n):
    cells = [f"c{i}" for i in range(n)]
    decls = ", ".join(["w"] + cells + ["r"])
    init = " && ".join(["w"] + cells + ["r"])
    flips = ", ".join(["w = !w"] + [f"{c} = !{c}" for c in cells] + ["r = !r"])
    lines = [
        f"// {n}-fold redundant one-bit memory: each write refreshes every",
        "// cell, reads report the majority, and a fault silently flips one cell.",
        "Process Memory {",
        f"  {decls} : BOOL;",
        f"  Initial: {init};",
        f"  [write] true -> {flips};",
        "  [read0] !r -> r = r;",
        "  [read1] r -> r = r;",
    ]
    for i, c in enumerate(cells):
        # the majority is re-evaluated with this cell already flipped;
        # assignments read the pre-state, so the flip is inlined
        literals = [f"!{x}" if x == c else x for x in cells]
        lines.append(f"  [fail{i}] faulty true -> {c} = !{c}, r = {majority(literals)};")
    lines += [
        "}",
        "",
        "Main () {",
        "  mem : Memory;",
        "  run mem();",
        "}",
    ]
    write(f"memory_{n}.gcl", "\n".join(lines) + "\n")


def memory_nominal():
    write(
        "memory_nominal.gcl",
        """// One-bit memory: write toggles the stored bit, reads report it.
Process Memory {
  w, r : BOOL;
  Initial: w && r;
  [write] true -> w = !w, r = !r;
  [read0] !r -> r = r;
  [read1] r -> r = r;
}

Main () {
  mem : Memory;
  run mem();
}
""",
    )


def nmr(n):
    regs = [f"i{i}" for i in range(n)]
    lines = [
        f"// {n}-modular redundancy: the environment drives all modules with the",
        "// same input, a fault flips one module's output, the voter reports the",
        "// majority.",
        f"Global {', '.join(regs)} : BOOL;",
        "",
        "Process Module(out : BOOL) {",
        "  Initial: !out;",
        "  [fail] faulty true -> out = !out;",
        "}",
        "",
        "Process Voter {",
        "  Initial: true;",
        f"  [vote] {majority(regs)} -> i0 = i0;",
        "}",
        "",
        "Process Environment {",
        "  Initial: true;",
        f"  [input0] true -> {', '.join(f'{r} = false' for r in regs)};",
        f"  [input1] true -> {', '.join(f'{r} = true' for r in regs)};",
        "}",
        "",
        "Main () {",
    ]
    for i in range(n):
        lines.append(f"  m{i} : Module;")
    lines += ["  v : Voter;", "  e : Environment;"]
    for i in range(n):
        lines.append(f"  run m{i}(i{i});")
    lines += ["  run v();", "  run e();", "}"]
    write(f"nmr_{n}.gcl", "\n".join(lines) + "\n")


def nmr_nominal():
    write(
        "nmr_nominal.gcl",
        """// Idealized voter: one perfect register driven by the environment.
Process Ideal {
  v : BOOL;
  Initial: !v;
  [vote] v -> v = v;
  [input0] true -> v = false;
  [input1] true -> v = true;
}

Main () {
  p : Ideal;
  run p();
}
""",
    )


PHIL_FIRST = """Process FirstPhil(forkL, forkR : BOOL) {
  hasL, hasR : BOOL;
  Initial: !hasL && !hasR && forkL && forkR;
  [get] forkL && !hasL && !hasR -> hasL = true, forkL = false;
  [get] hasL && forkR && !hasR -> hasR = true, forkR = false;
  [eat] hasL && hasR -> hasL = false, hasR = false, forkL = true, forkR = true;
}
"""

PHIL_OTHER = """Process Phil(forkL, forkR, mybad : BOOL) {
  hasL, hasR : BOOL;
  Initial: !hasL && !hasR && !mybad && forkL && forkR;
  [get] forkR && !hasR && !hasL -> hasR = true, forkR = false;
  [get] hasR && forkL && !hasL -> hasL = true, forkL = false;
  [get] @ALLBAD@ && forkL && !hasL && !hasR -> hasL = true, forkL = false;
  [get] @ALLBAD@ && hasL && forkR && !hasR -> hasR = true, forkR = false;
  [eat] hasL && hasR -> hasL = false, hasR = false, forkL = true, forkR = true;
@FAIL@}
"""

PHIL_FAIL = "  [fail] faulty !mybad -> mybad = true;\n"


def phil(n, nominal):
    forks = [f"fork{i}" for i in range(n)]
    bads = [f"bad{i}" for i in range(2, n + 1)]
    allbad = " && ".join(bads)
    lines = [
        f"// {n} dining philosophers. Philosopher 1 picks its left fork first,",
        "// the others pick right first, which keeps the ring deadlock-free.",
        "// A fault silently corrupts one philosopher; the corrupted ones defect",
        "// together (grabbing left forks first, closing the circular wait) only",
        "// once the whole cabal is corrupted.",
        f"Global {', '.join(forks + bads)} : BOOL;",
        "",
        PHIL_FIRST,
        PHIL_OTHER.replace("@ALLBAD@", allbad).replace(
            "@FAIL@", "" if nominal else PHIL_FAIL
        ),
        "Main () {",
        "  p1 : FirstPhil;",
    ]
    for i in range(2, n + 1):
        lines.append(f"  p{i} : Phil;")
    lines.append("  run p1(fork0, fork1);")
    for i in range(2, n + 1):
        left = forks[i - 1]
        right = forks[i % n]
        lines.append(f"  run p{i}({left}, {right}, bad{i});")
    lines.append("}")
    suffix = "_nominal" if nominal else ""
    write(f"phil_{n}{suffix}.gcl", "\n".join(lines) + "\n")


def byz(n, nominal):
    """Byzantine generals, one commander and n-1 lieutenants. The commander
    broadcasts an order; every lieutenant relays it to its peers (silently)
    and decides on the majority of what it received. A fault turns a
    lieutenant into a traitor who relays the opposite order; the traitor still
    decides on what it truly received, so a lone traitor stays masked when
    the loyal majority carries the vote."""
    m = n - 1  # lieutenants
    lids = list(range(2, n + 1))
    directs = [f"g1g{i}{s}" for i in lids for s in "AR"]
    relays = [
        f"g{i}g{j}{s}" for i in lids for j in lids if i != j for s in "AR"
    ]
    lines = [
        f"// Byzantine generals with {n} generals: a commander and {m} lieutenants.",
        "// Relaying is internal; the order and the decisions are observable.",
        f"Global {', '.join(directs + relays)} : BOOL;",
        "",
        "Process Commander {",
        "  sent : BOOL;",
        "  Initial: !sent && " + " && ".join(f"!{v}" for v in directs + relays) + ";",
        "  [sendAttack] !sent -> sent = true, "
        + ", ".join(f"g1g{i}A = true" for i in lids)
        + ";",
        "  [sendRetreat] !sent -> sent = true, "
        + ", ".join(f"g1g{i}R = true" for i in lids)
        + ";",
        "}",
        "",
    ]
    # lieutenant process: formals are the direct order, its outgoing relays
    # (one A/R pair per peer) and the incoming relays from each peer
    peers = m - 1
    formals = ["attack", "retreat"]
    for k in range(1, peers + 1):
        formals += [f"fw{k}A", f"fw{k}R"]
    for k in range(1, peers + 1):
        formals += [f"in{k}A", f"in{k}R"]
    votes_a = ["attack"] + [f"in{k}A" for k in range(1, peers + 1)]
    votes_r = ["retreat"] + [f"in{k}R" for k in range(1, peers + 1)]
    heard_all = " && ".join(
        f"(in{k}A || in{k}R)" for k in range(1, peers + 1)
    )
    relay_a = ", ".join(f"fw{k}A = true" for k in range(1, peers + 1))
    relay_r = ", ".join(f"fw{k}R = true" for k in range(1, peers + 1))
    lines += [
        f"Process Lieutenant({', '.join(formals)} : BOOL) {{",
        "  relayed, traitor, dA, dR : BOOL;",
        "  Initial: !relayed && !traitor && !dA && !dR;",
        "  [fw] internal (attack && !traitor || retreat && traitor) && !relayed -> "
        + relay_a
        + ", relayed = true;",
        "  [fw] internal (retreat && !traitor || attack && traitor) && !relayed -> "
        + relay_r
        + ", relayed = true;",
        # decisions wait until every peer's relay arrived, so that the order
        # of loyal and treacherous relays cannot be told apart
        f"  [attack] {heard_all} && {majority(votes_a)} && !dA && !dR -> dA = true;",
        f"  [retreat] {heard_all} && {majority(votes_r)} && !dA && !dR -> dR = true;",
        "  [done] dA || dR -> dA = dA;",
    ]
    if not nominal:
        lines.append("  [betray] faulty !traitor && !relayed -> traitor = true;")
    lines += ["}", "", "Main () {", "  cmd : Commander;"]
    for i in lids:
        lines.append(f"  l{i} : Lieutenant;")
    lines.append("  run cmd();")
    for i in lids:
        others = [j for j in lids if j != i]
        actuals = [f"g1g{i}A", f"g1g{i}R"]
        for j in others:
            actuals += [f"g{i}g{j}A", f"g{i}g{j}R"]
        for j in others:
            actuals += [f"g{j}g{i}A", f"g{j}g{i}R"]
        lines.append(f"  run l{i}({', '.join(actuals)});")
    lines.append("}")
    suffix = "_nominal" if nominal else ""
    write(f"byz_{n}{suffix}.gcl", "\n".join(lines) + "\n")


def brp(chunks, maxr, nominal):
    """Bounded retransmission protocol: a sender pushes `chunks` file chunks
    through a lossy channel with stop-and-wait acknowledgements. A fault
    drops the chunk in flight; the sender silently retransmits up to `maxr`
    times per file and aborts observably once the budget is exhausted. The
    nominal protocol runs over a reliable channel."""
    t = [f"t{j}" for j in range(1, maxr + 2)]  # unary timeout count
    d = [f"d{j}" for j in range(1, chunks)]  # unary chunk progress
    sender_locals = ["active", "sending"] + ([] if nominal else ["tmo"] + t) + d
    reset = ", ".join(f"{v} = false" for v in (d + ([] if nominal else t)))
    reset = (", " + reset) if reset else ""
    lines = [
        f"// Bounded retransmission of a {chunks}-chunk file"
        + ("." if nominal else f", up to {maxr} retransmission(s) per file."),
        "Global flagK, flagL : BOOL;",
        "",
        "Process Sender {",
        f"  {', '.join(sender_locals)} : BOOL;",
        "  Initial: " + " && ".join(f"!{v}" for v in sender_locals) + ";",
        "  [newfile] !active -> active = true;",
        "  [send] active && !sending" + ("" if nominal else " && !tmo") + " -> flagK = true, sending = true;",
    ]
    for j in range(1, chunks):
        prev = f"d{j - 1} && " if j > 1 else ""
        lines.append(
            f"  [ack] internal flagL && {prev}!d{j} -> flagL = false, sending = false, d{j} = true;"
        )
    done = f"d{chunks - 1} && " if chunks > 1 else ""
    lines.append(
        f"  [success] flagL && {done}sending -> flagL = false, sending = false, active = false{reset};"
    )
    if not nominal:
        for j in range(1, maxr + 2):
            prev = f"t{j - 1} && " if j > 1 else ""
            lines.append(
                f"  [timeout] faulty flagK && {prev}!t{j} -> flagK = false, t{j} = true, tmo = true;"
            )
        lines.append(
            f"  [resend] internal tmo && !t{maxr + 1} -> flagK = true, tmo = false;"
        )
        lines.append(
            f"  [abort] tmo && t{maxr + 1} -> tmo = false, sending = false, active = false{reset};"
        )
    lines += [
        "}",
        "",
        "Process Receiver {",
        "  Initial: !flagK && !flagL;",
        "  [deliver] flagK -> flagK = false, flagL = true;",
        "}",
        "",
        "Main () {",
        "  s : Sender;",
        "  r : Receiver;",
        "  run s();",
        "  run r();",
        "}",
    ]
    suffix = "_nominal" if nominal else f"_{maxr}"
    write(f"brp{chunks}{suffix}.gcl", "\n".join(lines) + "\n")


def main():
    os.makedirs(ROOT, exist_ok=True)
    memory_nominal()
    for n in (3, 5, 7, 9):
        memory(n)
    nmr_nominal()
    for n in (3, 5, 7, 9):
        nmr(n)
    for n in (2, 3, 4, 5):
        phil(n, nominal=False)
        phil(n, nominal=True)
    for n in (3, 4):
        byz(n, nominal=False)
        byz(n, nominal=True)
    for chunks in (1, 3, 5):
        brp(chunks, 0, nominal=True)
        for maxr in (1, 3, 5, 7):
            brp(chunks, maxr, nominal=False)


if __name__ == "__main__":
    main()
