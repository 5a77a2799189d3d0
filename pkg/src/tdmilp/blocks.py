"""Border/diagonal block decomposition of a matrix guided by a decomposition.

The columns mapped to the top path of the decomposition (up to and including
its first non-degenerate vertex) form the border; each subtree hanging below
contributes one diagonal block together with the rows supported inside it.
Border-only rows attach to the first block.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .linalg import Matrix
from .structure import (Graph, StructureError, TdDecomposition, primal_graph,
                        td_stats, validate_td)


@dataclass(frozen=True)
class Block:
    """One diagonal block: its border strip, diagonal part and local tree."""

    border: Matrix
    diagonal: Matrix
    decomposition: TdDecomposition
    row_ids: tuple[int, ...]
    col_ids: tuple[int, ...]


@dataclass(frozen=True)
class BlockStructure:
    """Result of decomposing a matrix along its decomposition's top path."""

    k1: int
    border_cols: tuple[int, ...]
    blocks: tuple[Block, ...]
    rows: int
    cols: int

    @property
    def row_order(self) -> tuple[int, ...]:
        return tuple(i for blk in self.blocks for i in blk.row_ids)

    @property
    def col_order(self) -> tuple[int, ...]:
        return self.border_cols + tuple(j for blk in self.blocks for j in blk.col_ids)

    def reassemble(self) -> Matrix:
        """The block display matrix; equals the input permuted by the maps."""
        from fractions import Fraction
        widths = [len(b.col_ids) for b in self.blocks]
        total_c = self.k1 + sum(widths)
        rows = []
        for bi, blk in enumerate(self.blocks):
            before = sum(widths[:bi])
            after = sum(widths[bi + 1:])
            for i in range(blk.border.rows):
                rows.append(list(blk.border.row(i)) + [Fraction(0)] * before
                            + list(blk.diagonal.row(i)) + [Fraction(0)] * after)
        return Matrix(rows, cols=total_c)


def top_path(f: TdDecomposition) -> list[int]:
    """Root chain down to and including the first non-degenerate vertex."""
    if len(f.roots) != 1:
        raise StructureError("decomposition must be a single tree")
    v = f.roots[0]
    path = [v]
    while len(f.children(v)) == 1:
        v = f.children(v)[0]
        path.append(v)
    return path


def _local_tree(f: TdDecomposition, vertices: list[int]) -> TdDecomposition:
    """Subtree decomposition relabelled to local indices (vertices sorted)."""
    index = {v: i for i, v in enumerate(vertices)}
    parent: list[Optional[int]] = []
    for v in vertices:
        p = f.parent[v]
        parent.append(index[p] if p is not None and p in index else None)
    return TdDecomposition(parent)


def primal_decompose(a: Matrix, f: TdDecomposition,
                     graph: Graph | None = None) -> BlockStructure:
    """Split a into border columns and diagonal blocks along f's top path.

    f must be a single tree over the columns of a that validates against the
    primal graph.  Deterministic: blocks follow the ascending-index order of
    the first non-degenerate vertex's children, rows keep ascending order.
    """
    if a.cols == 0:
        raise StructureError("cannot decompose a matrix with no columns")
    if graph is None:
        graph = primal_graph(a)
    if not validate_td(graph, f):
        raise StructureError("decomposition does not validate against the primal graph")
    path = top_path(f)
    k1 = len(path)
    border = set(path)
    first_nondeg = path[-1]
    subtree_children = f.children(first_nondeg)

    if not subtree_children:
        # the whole tree is a path: everything is border, one empty block
        row_ids = tuple(range(a.rows))
        blk = Block(border=a.submatrix(row_ids, path),
                    diagonal=a.submatrix(row_ids, ()),
                    decomposition=TdDecomposition([]),
                    row_ids=row_ids, col_ids=())
        return BlockStructure(k1=k1, border_cols=tuple(path), blocks=(blk,),
                              rows=a.rows, cols=a.cols)

    subtrees = [f.subtree(c) for c in subtree_children]
    col_to_block: dict[int, int] = {}
    for bi, cols in enumerate(subtrees):
        for c in cols:
            col_to_block[c] = bi

    block_rows: list[list[int]] = [[] for _ in subtrees]
    for i in range(a.rows):
        support = {j for j in range(a.cols) if a[i, j] != 0}
        outside = support - border
        if not outside:
            block_rows[0].append(i)  # border-only rows attach to the first block
            continue
        owners = {col_to_block[j] for j in outside}
        if len(owners) != 1:
            raise StructureError("row spans two subtrees; decomposition invalid")
        block_rows[owners.pop()].append(i)

    blocks = []
    for bi, cols in enumerate(subtrees):
        rows = tuple(block_rows[bi])
        blocks.append(Block(border=a.submatrix(rows, path),
                            diagonal=a.submatrix(rows, cols),
                            decomposition=_local_tree(f, cols),
                            row_ids=rows, col_ids=tuple(cols)))
    return BlockStructure(k1=k1, border_cols=tuple(path), blocks=tuple(blocks),
                          rows=a.rows, cols=a.cols)


def graft_path_above(f: TdDecomposition, path_len: int) -> TdDecomposition:
    """New decomposition: a fresh path of path_len vertices above f's root(s).

    The fresh path occupies indices 0..path_len-1, f's vertices shift up by
    path_len.  Used for the border+block strips, whose columns are ordered
    border first.
    """
    parent: list[Optional[int]] = []
    for i in range(path_len):
        parent.append(i - 1 if i > 0 else None)
    top = path_len - 1 if path_len > 0 else None
    for v in range(f.vertex_count):
        p = f.parent[v]
        parent.append(p + path_len if p is not None else top)
    return TdDecomposition(parent)


def hatted_blocks(b: BlockStructure) -> list[tuple[Matrix, TdDecomposition]]:
    """Border-extended strips: each block's (border | diagonal) columns,
    decomposed by grafting a path of k1 fresh vertices above the block tree."""
    out = []
    for blk in b.blocks:
        strip = blk.border.hstack(blk.diagonal)
        out.append((strip, graft_path_above(blk.decomposition, b.k1)))
    return out


def structure_trace(a: Matrix, f: TdDecomposition, indent: str = "") -> str:
    """Indented tree rendering of the recursive block structure."""
    lines: list[str] = []
    _trace_forest(a, f, indent, lines)
    return "\n".join(lines)


def _trace_forest(a: Matrix, f: TdDecomposition, indent: str, lines: list[str]) -> None:
    if len(f.roots) > 1:
        for t, root in enumerate(f.roots):
            cols = f.subtree(root)
            rows = [i for i in range(a.rows)
                    if any(a[i, j] != 0 for j in cols)]
            lines.append(f"{indent}component {t}: cols={list(cols)}")
            _trace_tree(a.submatrix(rows, cols), _local_tree(f, cols), indent + "  ", lines)
        return
    _trace_tree(a, f, indent, lines)


def _trace_tree(a: Matrix, f: TdDecomposition, indent: str, lines: list[str]) -> None:
    if a.cols == 0:
        lines.append(f"{indent}(no columns)")
        return
    stats = td_stats(f)
    bs = primal_decompose(a, f)
    lines.append(f"{indent}node: k1={bs.k1} border_cols={list(bs.border_cols)} "
                 f"d={len(bs.blocks)} height={stats.height} ttd={stats.topological_height}")
    for bi, blk in enumerate(bs.blocks):
        lines.append(f"{indent}  block {bi}: rows={list(blk.row_ids)} cols={list(blk.col_ids)} "
                     f"size={blk.diagonal.rows}x{blk.diagonal.cols}")
        if blk.diagonal.cols > 0:
            _trace_tree(blk.diagonal, blk.decomposition, indent + "    ", lines)
