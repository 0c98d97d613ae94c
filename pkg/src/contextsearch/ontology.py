"""Ontology data model: instances, a class taxonomy rooted at Entity, and typed relations.

Everything is immutable after :func:`load_ontology`; readers may share an
Ontology across threads freely.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set, Tuple

import numpy as np

from .errors import OntologyError

ROOT_CLASS = "Entity"


@dataclass
class Relation:
    """A typed relation plus its fact pairs.

    ``subjects``/``objects`` are parallel int64 arrays sorted by (subject, object);
    ``r_subjects``/``r_objects`` hold the same pairs sorted by (object, subject)
    so both traversal directions are range lookups.
    """

    name: str
    source_class: int
    target_class: int
    subjects: np.ndarray
    objects: np.ndarray
    r_subjects: np.ndarray
    r_objects: np.ndarray

    @property
    def fact_count(self) -> int:
        return int(self.subjects.shape[0])


class Ontology:
    def __init__(self):
        self.entity_names: List[str] = []
        self.entity_ids: Dict[str, int] = {}
        self.class_names: List[str] = []
        self.class_ids: Dict[str, int] = {}
        self.parents: List[Set[int]] = []      # class -> parent classes
        self.children: List[Set[int]] = []     # class -> child classes
        self.direct_members: List[Set[int]] = []   # class -> entity ids asserted directly
        self.entity_classes: List[Set[int]] = []   # entity -> directly asserted classes
        self.relations: Dict[str, Relation] = {}
        self.root: int = -1
        self._instances_cache: Dict[int, np.ndarray] = {}
        self._descendants_cache: Dict[int, Set[int]] = {}
        self._gender_cache: Optional[Dict[int, str]] = None

    # -- lookups ----------------------------------------------------------

    def entity_id(self, name: str) -> Optional[int]:
        return self.entity_ids.get(name)

    def class_id(self, name: str) -> Optional[int]:
        return self.class_ids.get(name)

    def entity_name(self, eid: int) -> str:
        return self.entity_names[eid]

    def class_name(self, cid: int) -> str:
        return self.class_names[cid]

    @property
    def n_entities(self) -> int:
        return len(self.entity_names)

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    # -- taxonomy ---------------------------------------------------------

    def descendants(self, cid: int) -> Set[int]:
        """All taxonomy descendants of ``cid``, including ``cid`` itself."""
        cached = self._descendants_cache.get(cid)
        if cached is not None:
            return cached
        seen = {cid}
        stack = [cid]
        while stack:
            for child in self.children[stack.pop()]:
                if child not in seen:
                    seen.add(child)
                    stack.append(child)
        self._descendants_cache[cid] = seen
        return seen

    def ancestors(self, cid: int) -> Set[int]:
        """All taxonomy ancestors of ``cid``, including ``cid`` itself."""
        seen = {cid}
        stack = [cid]
        while stack:
            for parent in self.parents[stack.pop()]:
                if parent not in seen:
                    seen.add(parent)
                    stack.append(parent)
        return seen

    def instances_of(self, cid: int) -> np.ndarray:
        """Sorted entity ids that are members of ``cid`` or of any descendant."""
        if not 0 <= cid < self.n_classes:
            raise OntologyError(f"unknown class id {cid}")
        cached = self._instances_cache.get(cid)
        if cached is not None:
            return cached
        members: Set[int] = set()
        for c in self.descendants(cid):
            members.update(self.direct_members[c])
        arr = np.array(sorted(members), dtype=np.int64)
        self._instances_cache[cid] = arr
        return arr

    def is_instance_of(self, eid: int, cid: int) -> bool:
        wanted = self.descendants(cid)
        return any(c in wanted for c in self.entity_classes[eid])

    def classes_of(self, eid: int) -> Set[int]:
        """Transitive class memberships of one entity."""
        out: Set[int] = set()
        for c in self.entity_classes[eid]:
            out.update(self.ancestors(c))
        return out

    # -- relations --------------------------------------------------------

    def relation(self, name: str) -> Relation:
        rel = self.relations.get(name)
        if rel is None:
            raise OntologyError(f"unknown relation {name!r}")
        return rel

    def relation_image(self, name: str, direction: str, sources: Iterable[int]) -> Dict[int, Set[int]]:
        """Map each source entity to the fact partners reachable via ``name``.

        ``direction`` is ``"forward"`` (source is the triple subject) or
        ``"reverse"`` (source is the triple object).
        """
        rel = self.relation(name)
        if direction == "forward":
            keys, vals = rel.subjects, rel.objects
        elif direction == "reverse":
            keys, vals = rel.r_objects, rel.r_subjects
        else:
            raise ValueError(f"direction must be forward or reverse, got {direction!r}")
        out: Dict[int, Set[int]] = {}
        for src in sources:
            lo = int(np.searchsorted(keys, src, side="left"))
            hi = int(np.searchsorted(keys, src, side="right"))
            if hi > lo:
                out[src] = set(int(v) for v in vals[lo:hi])
        return out

    # -- gender (for anaphora) ---------------------------------------------

    def gender(self, eid: int) -> Optional[str]:
        """"male" / "female" / "neuter", or None when unresolvable.

        Gender comes from an optional ``has-gender`` relation whose objects are
        entities named male/female. Entities without a fact are neuter unless
        they are (transitive) instances of a class named Person.
        """
        if self._gender_cache is None:
            cache: Dict[int, str] = {}
            rel = self.relations.get("has-gender")
            if rel is not None:
                for s, o in zip(rel.subjects, rel.objects):
                    g = self.entity_names[int(o)].lower()
                    if g in ("male", "female"):
                        cache[int(s)] = g
            self._gender_cache = cache
        g = self._gender_cache.get(eid)
        if g is not None:
            return g
        person = self.class_ids.get("Person")
        if person is not None and self.is_instance_of(eid, person):
            return None
        return "neuter"


def _check_acyclic(parents: Dict[str, Set[str]]):
    # iterative three-color DFS over the child->parent edges
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {name: WHITE for name in parents}
    for start in parents:
        if color[start] != WHITE:
            continue
        stack: List[Tuple[str, Iterable]] = [(start, iter(parents[start]))]
        color[start] = GRAY
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if nxt not in color:
                    continue
                if color[nxt] == GRAY:
                    raise OntologyError(f"taxonomy cycle involving class {nxt!r}")
                if color[nxt] == WHITE:
                    color[nxt] = GRAY
                    stack.append((nxt, iter(parents[nxt])))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                stack.pop()


def load_ontology(path) -> Ontology:
    """Load the TSV triple file at ``path``.

    Record forms (tab separated, ``#`` starts a comment line):

        class     NAME   subclass-of  PARENT
        instance  NAME   is-a         CLASS
        relation  NAME   SOURCE_CLASS TARGET_CLASS
        fact      SUBJECT RELATION    OBJECT

    Ids are assigned by lexicographic order of canonical names, so loading the
    same file twice produces identical tables.
    """
    class_parents: Dict[str, Set[str]] = {ROOT_CLASS: set()}
    instance_classes: Dict[str, Set[str]] = {}
    relation_decls: Dict[str, Tuple[str, str, int]] = {}
    facts: List[Tuple[str, str, str, int]] = []

    def ensure_class(name: str):
        if name not in class_parents:
            class_parents[name] = set()

    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise OntologyError(f"expected 4 tab-separated fields, got {len(parts)}", line=lineno)
            kind, a, b, c = (p.strip() for p in parts)
            if kind == "class":
                if b != "subclass-of":
                    raise OntologyError(f"class record must use subclass-of, got {b!r}", line=lineno)
                ensure_class(a)
                ensure_class(c)
                class_parents[a].add(c)
            elif kind == "instance":
                if b != "is-a":
                    raise OntologyError(f"instance record must use is-a, got {b!r}", line=lineno)
                ensure_class(c)
                instance_classes.setdefault(a, set()).add(c)
            elif kind == "relation":
                if a in relation_decls:
                    raise OntologyError(f"duplicate relation name {a!r}", line=lineno)
                ensure_class(b)
                ensure_class(c)
                relation_decls[a] = (b, c, lineno)
            elif kind == "fact":
                facts.append((a, b, c, lineno))
            else:
                raise OntologyError(f"unknown record kind {kind!r}", line=lineno)

    # classes without an explicit parent hang off the root
    for name, ps in class_parents.items():
        if not ps and name != ROOT_CLASS:
            ps.add(ROOT_CLASS)
    _check_acyclic(class_parents)

    onto = Ontology()
    onto.class_names = sorted(class_parents)
    onto.class_ids = {n: i for i, n in enumerate(onto.class_names)}
    onto.root = onto.class_ids[ROOT_CLASS]
    n_classes = len(onto.class_names)
    onto.parents = [set() for _ in range(n_classes)]
    onto.children = [set() for _ in range(n_classes)]
    for name, ps in class_parents.items():
        cid = onto.class_ids[name]
        for p in ps:
            pid = onto.class_ids[p]
            onto.parents[cid].add(pid)
            onto.children[pid].add(cid)

    onto.entity_names = sorted(instance_classes)
    onto.entity_ids = {n: i for i, n in enumerate(onto.entity_names)}
    onto.entity_classes = [set() for _ in onto.entity_names]
    onto.direct_members = [set() for _ in range(n_classes)]
    for name, cls in instance_classes.items():
        eid = onto.entity_ids[name]
        for cname in cls:
            cid = onto.class_ids[cname]
            onto.entity_classes[eid].add(cid)
            onto.direct_members[cid].add(eid)

    rel_facts: Dict[str, List[Tuple[int, int]]] = {name: [] for name in relation_decls}
    for subj, rname, obj, lineno in facts:
        decl = relation_decls.get(rname)
        if decl is None:
            raise OntologyError(f"fact uses undeclared relation {rname!r}", line=lineno)
        s_id = onto.entity_ids.get(subj)
        o_id = onto.entity_ids.get(obj)
        if s_id is None:
            raise OntologyError(f"fact subject {subj!r} is not a declared instance", line=lineno)
        if o_id is None:
            raise OntologyError(f"fact object {obj!r} is not a declared instance", line=lineno)
        src_cls, tgt_cls, _ = decl
        if not onto.is_instance_of(s_id, onto.class_ids[src_cls]):
            raise OntologyError(
                f"fact ({subj}, {rname}, {obj}): subject is not an instance of {src_cls}", line=lineno)
        if not onto.is_instance_of(o_id, onto.class_ids[tgt_cls]):
            raise OntologyError(
                f"fact ({subj}, {rname}, {obj}): object is not an instance of {tgt_cls}", line=lineno)
        rel_facts[rname].append((s_id, o_id))

    for rname, (src_cls, tgt_cls, _) in relation_decls.items():
        pairs = sorted(set(rel_facts[rname]))
        subjects = np.array([p[0] for p in pairs], dtype=np.int64)
        objects = np.array([p[1] for p in pairs], dtype=np.int64)
        rpairs = sorted(set((o, s) for s, o in pairs))
        r_objects = np.array([p[0] for p in rpairs], dtype=np.int64)
        r_subjects = np.array([p[1] for p in rpairs], dtype=np.int64)
        onto.relations[rname] = Relation(
            name=rname,
            source_class=onto.class_ids[src_cls],
            target_class=onto.class_ids[tgt_cls],
            subjects=subjects,
            objects=objects,
            r_subjects=r_subjects,
            r_objects=r_objects,
        )
    return onto
