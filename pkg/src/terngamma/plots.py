"""Figure rendering for command reports.

Each command's report payload can be rendered to PNG figures with CSV
companions holding the plotted tables.  Everything goes through the Agg
backend, so rendering works headless.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _save(fig, outdir: Path, name: str, written: list):
    path = outdir / name
    fig.savefig(path, dpi=110, bbox_inches="tight")
    plt.close(fig)
    written.append(str(path))


def _csv(outdir: Path, name: str, header, rows, written: list):
    path = outdir / name
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    written.append(str(path))


def _verdict_bar(ax, labels, passed, title):
    colors = ["#2a9d4e" if p else "#c83737" for p in passed]
    ax.bar(range(len(labels)), [1] * len(labels), color=colors)
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax.set_yticks([])
    ax.set_title(title)


def render_figures(command: str, result: dict, outdir) -> list[str]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[str] = []

    if command == "check-axioms":
        axioms = result.get("axioms", {})
        keys = sorted(axioms)
        fig, ax = plt.subplots(figsize=(6, 2.5))
        _verdict_bar(ax, [axioms[k]["name"] for k in keys],
                     [axioms[k]["passed"] for k in keys], "axiom verdicts")
        _save(fig, outdir, "axiom_verdicts.png", written)
        _csv(outdir, "axiom_verdicts.csv", ["axiom", "name", "passed", "checked"],
             [[k, axioms[k]["name"], axioms[k]["passed"], axioms[k]["checked"]]
              for k in keys], written)

    elif command == "spec":
        primes = result.get("primes", [])
        opens = result.get("basic_opens", {})
        elems = sorted(opens, key=int)
        if primes:
            grid = [[1 if int(p_idx) in set(opens[a]) else 0
                     for p_idx in range(len(primes))] for a in elems]
            fig, ax = plt.subplots(figsize=(4, 3))
            ax.imshow(grid, cmap="Greens", aspect="auto", vmin=0, vmax=1)
            ax.set_xlabel("prime index")
            ax.set_ylabel("element a")
            ax.set_title("basic opens: a in row, prime in D(a) shaded")
            _save(fig, outdir, "spectrum.png", written)
        _csv(outdir, "primes.csv", ["index", "members"],
             [[i, " ".join(map(str, p))] for i, p in enumerate(primes)], written)

    elif command == "localize":
        fracs = result.get("fractions", [])
        sizes = result.get("class_sizes", [1] * len(fracs))
        fig, ax = plt.subplots(figsize=(5, 3))
        ax.bar(range(len(fracs)), sizes, color="#44709d")
        ax.set_xticks(range(len(fracs)))
        ax.set_xticklabels(fracs, rotation=45, ha="right", fontsize=8)
        ax.set_ylabel("pairs in class")
        ax.set_title("fraction classes")
        _save(fig, outdir, "localization.png", written)
        _csv(outdir, "classes.csv", ["class", "representative", "size"],
             [[i, fracs[i], sizes[i]] for i in range(len(fracs))], written)

    elif command in ("tensor", "complete", "localize-module"):
        factors = result.get("invariant_factors", [])
        fig, ax = plt.subplots(figsize=(4, 3))
        ax.bar(range(len(factors)), factors, color="#7a5195")
        ax.set_xticks(range(len(factors)))
        ax.set_ylabel("invariant factor")
        ax.set_title("%s: presented group" % command)
        _save(fig, outdir, "invariant_factors.png", written)
        _csv(outdir, "invariant_factors.csv", ["position", "factor"],
             list(enumerate(factors)), written)

    elif command == "sheaf-check":
        sections = result.get("presheaf", {}).get("sections", [])
        fig, ax = plt.subplots(figsize=(5, 3))
        ax.bar([s["element"] for s in sections], [s["size"] for s in sections],
               color="#2a9d8f")
        ax.set_xlabel("basic open generator a")
        ax.set_ylabel("|sections on D(a)|")
        ax.set_title("tilde presheaf sections")
        _save(fig, outdir, "sections.png", written)
        _csv(outdir, "sections.csv", ["element", "kind", "size"],
             [[s["element"], s["kind"], s["size"]] for s in sections], written)

    elif command == "homology":
        hom = result.get("homology", {})
        degrees = sorted(int(k) for k in hom)
        fig, ax = plt.subplots(figsize=(4, 3))
        ax.bar(degrees, [hom[str(n)]["size"] for n in degrees], color="#e07b39")
        ax.set_xlabel("degree")
        ax.set_ylabel("|H_n|")
        ax.set_title("homology sizes")
        _save(fig, outdir, "homology.png", written)
        _csv(outdir, "homology.csv", ["degree", "size", "kernel", "image"],
             [[n, hom[str(n)]["size"], hom[str(n)]["kernel_size"],
               hom[str(n)]["image_size"]] for n in degrees], written)

    elif command == "shadow-search":
        counts = result.get("rejection_counts", {})
        labels = sorted(counts)
        fig, ax = plt.subplots(figsize=(5, 3))
        ax.bar(range(len(labels)), [counts[k] for k in labels], color="#c83737")
        ax.set_xticks(range(len(labels)))
        ax.set_xticklabels(labels, rotation=20, ha="right", fontsize=8)
        ax.set_ylabel("candidates")
        ax.set_title("rejections (satisfying: %d)" % len(result.get("satisfying", [])))
        _save(fig, outdir, "shadow_search.png", written)
        _csv(outdir, "candidates.csv", ["reason", "count"],
             [[k, counts[k]] for k in labels], written)

    return written
