"""Audience matching: cluster message authors, build the group tree, pick bins.

Former smokers' posts form the intervention pool.  Each of the nine profile
features is clustered independently (booleans bypass k-means); users sharing
every per-feature cluster form a group; a Gini decision tree over the groups
turns into the bin structure that maps any target user to a peer message.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from peernudge.classifiers.tree import DecisionTree, TreeNode
from peernudge.clustering import select_k
from peernudge.errors import (
    EmptyBinError,
    MissingFeatureError,
    SingleGroupError,
)

GROUP_MODEL_FORMAT_VERSION = 1

# Profile features, in canonical order, with the console abbreviations.
FEATURE_NAMES = (
    "created_at_mms",
    "favourites_count",
    "followers_count",
    "friends_count",
    "listed_count",
    "statuses_count",
    "default_profile",
    "default_profile_image",
    "verified",
)
BOOLEAN_FEATURES = ("default_profile", "default_profile_image", "verified")
FEATURE_ABBREVIATIONS = {
    "created_at_mms": "A",
    "favourites_count": "Fa",
    "followers_count": "Fl",
    "friends_count": "Fr",
    "listed_count": "Lc",
    "statuses_count": "S",
    "default_profile": "P",
    "default_profile_image": "PI",
    "verified": "V",
}


@dataclass(frozen=True)
class UserMetadata:
    """The nine profile features used for clustering and binning."""

    created_at_mms: int
    favourites_count: int
    followers_count: int
    friends_count: int
    listed_count: int
    statuses_count: int
    default_profile: bool
    default_profile_image: bool
    verified: bool

    def __post_init__(self):
        for name in FEATURE_NAMES[:6]:
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")

    def to_vector(self) -> np.ndarray:
        """All nine features as floats, booleans as 0/1, canonical order."""
        return np.array([float(getattr(self, name)) for name in FEATURE_NAMES])

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in FEATURE_NAMES}

    @classmethod
    def from_dict(cls, data: dict) -> "UserMetadata":
        kwargs = {}
        for name in FEATURE_NAMES:
            value = data[name]
            kwargs[name] = bool(value) if name in BOOLEAN_FEATURES else int(value)
        return cls(**kwargs)


@dataclass
class InterventionMessage:
    """A former smoker's post, with its author profile and assigned bin."""

    message_id: str
    text: str
    author: UserMetadata
    source_tag: str = ""
    bin_id: int | None = None

    def __post_init__(self):
        if not self.text:
            raise ValueError("message text must be non-empty")

    def to_dict(self) -> dict:
        return {
            "message_id": self.message_id,
            "text": self.text,
            "source_tag": self.source_tag,
            "author": self.author.to_dict(),
            "bin_id": self.bin_id,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "InterventionMessage":
        return cls(
            message_id=str(data["message_id"]),
            text=data["text"],
            author=UserMetadata.from_dict(data["author"]),
            source_tag=data.get("source_tag", ""),
            bin_id=data.get("bin_id"),
        )


def load_message_pool(path: str | Path) -> list[InterventionMessage]:
    """Read a JSON-lines message pool."""
    messages = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line:
            messages.append(InterventionMessage.from_dict(json.loads(line)))
    return messages


def group_users(per_feature_assignments: dict) -> dict:
    """Group ids from per-feature cluster tuples.

    Two users share a group exactly when their full tuples are equal; the
    result is the intersection of the per-feature partitions.  Group ids are
    assigned in first-seen order over the input's iteration order.
    """
    lengths = {len(t) for t in per_feature_assignments.values()}
    if len(lengths) > 1:
        raise MissingFeatureError("users have cluster tuples of differing lengths")
    if any(v is None for t in per_feature_assignments.values() for v in t):
        raise MissingFeatureError("a user is missing a feature assignment")
    groups: dict = {}
    out = {}
    for user, key in per_feature_assignments.items():
        key = tuple(key)
        if key not in groups:
            groups[key] = len(groups)
        out[user] = groups[key]
    return out


def select_representative(members: list[InterventionMessage]) -> InterventionMessage:
    """The member nearest the bin's author centroid in z-scored numeric space.

    Numeric features are standardized over the bin members (constant
    features contribute zero).  Exact distance ties fall to the smallest
    created_at_mms, then smallest message_id; members are canonically
    ordered first so the result is independent of input order.
    """
    if not members:
        raise EmptyBinError("cannot pick a representative from an empty bin")
    ordered = sorted(members, key=lambda m: m.message_id)
    numeric = np.array([m.author.to_vector()[:6] for m in ordered])
    mean = numeric.mean(axis=0)
    std = numeric.std(axis=0)
    std[std == 0.0] = 1.0
    z = (numeric - mean) / std
    centroid = z.mean(axis=0)
    dists = np.sqrt(((z - centroid) ** 2).sum(axis=1))
    ranked = sorted(
        range(len(ordered)),
        key=lambda i: (dists[i], ordered[i].author.created_at_mms,
                       ordered[i].message_id),
    )
    return ordered[ranked[0]]


@dataclass
class FeatureClusters:
    """Clustering of one feature: kind plus centroids in original units."""

    kind: str  # "numeric" | "boolean" | "constant"
    centroids: np.ndarray

    def assign(self, value: float) -> int:
        if self.kind == "constant":
            return 0
        if self.kind == "boolean":
            return int(bool(value)) if self.centroids.size == 2 else 0
        return int(np.argmin(np.abs(self.centroids - float(value))))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "centroids": self.centroids.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "FeatureClusters":
        return cls(kind=data["kind"],
                   centroids=np.asarray(data["centroids"], dtype=np.float64))


def _cluster_feature(name: str, column: np.ndarray, k_range, restarts: int,
                     seed: int) -> tuple[FeatureClusters, np.ndarray]:
    distinct = np.unique(column)
    if distinct.size == 1:
        spec = FeatureClusters("constant", centroids=distinct.astype(np.float64))
        return spec, np.zeros(column.size, dtype=np.int64)
    if name in BOOLEAN_FEATURES:
        assignments = (column > 0).astype(np.int64)
        spec = FeatureClusters("boolean", centroids=np.array([0.0, 1.0]))
        return spec, assignments
    # standardize before clustering; centroids are stored in original units
    mean = float(column.mean())
    std = float(column.std()) or 1.0
    z = (column - mean) / std
    _, assignments, centroids = select_k(z, k_range=k_range,
                                         restarts=restarts, seed=seed)
    spec = FeatureClusters("numeric", centroids=centroids * std + mean)
    return spec, assignments


@dataclass
class GroupModel:
    """Built matching model: per-feature clusters, group tree, and bins."""

    feature_clusters: dict = field(default_factory=dict)
    group_table: dict = field(default_factory=dict)
    tree: DecisionTree | None = None
    bins: dict = field(default_factory=dict)
    messages: dict = field(default_factory=dict)
    n_groups: int = 0

    @classmethod
    def build(cls, pool: list[InterventionMessage], k_range=range(2, 9),
              restarts: int = 10, seed: int = 0,
              max_depth: int | None = None) -> "GroupModel":
        """Cluster the pool authors, grow the group tree, populate the bins.

        The tree is grown until every leaf is group-pure (the default
        ``max_depth=None``), which guarantees each author re-maps to the bin
        holding their own message.
        """
        if not pool:
            raise EmptyBinError("message pool is empty")
        model = cls()
        vectors = np.stack([m.author.to_vector() for m in pool])

        tuples = [[] for _ in pool]
        for j, name in enumerate(FEATURE_NAMES):
            spec, assignments = _cluster_feature(
                name, vectors[:, j], k_range, restarts, seed=(seed * 31 + j))
            model.feature_clusters[name] = spec
            for i, a in enumerate(assignments):
                tuples[i].append(int(a))

        assignments_by_user = {i: tuple(t) for i, t in enumerate(tuples)}
        groups = group_users(assignments_by_user)
        model.group_table = {
            " ".join(map(str, key)): gid
            for key, gid in _group_key_table(assignments_by_user, groups).items()
        }
        labels = np.array([groups[i] for i in range(len(pool))])
        model.n_groups = int(labels.max()) + 1
        if model.n_groups < 2:
            raise SingleGroupError("metadata clustering produced a single group")

        model.tree = DecisionTree(max_depth=max_depth, min_leaf=1).fit(vectors, labels)

        model.messages = {m.message_id: m for m in pool}
        for message, vector in zip(pool, vectors):
            leaf, _ = model.tree.route(vector)
            bin_id = leaf.leaf_id
            message.bin_id = bin_id
            model.bins.setdefault(bin_id, {"message_ids": []})
            model.bins[bin_id]["message_ids"].append(message.message_id)
        for bin_id, info in model.bins.items():
            members = [model.messages[mid] for mid in info["message_ids"]]
            info["representative_id"] = select_representative(members).message_id
        return model

    def assign_bin(self, user: UserMetadata) -> int:
        leaf, _ = self.tree.route(user.to_vector())
        return leaf.leaf_id

    def bin_path(self, user: UserMetadata) -> list[dict]:
        """Decision path for a user, with feature names and abbreviations."""
        _, path = self.tree.route(user.to_vector())
        for step in path:
            name = FEATURE_NAMES[step["feature"]]
            step["feature_name"] = name
            step["abbreviation"] = FEATURE_ABBREVIATIONS[name]
        return path

    def representative_for(self, user: UserMetadata) -> InterventionMessage:
        bin_id = self.assign_bin(user)
        info = self.bins.get(bin_id)
        if not info or not info["message_ids"]:
            raise EmptyBinError(f"bin {bin_id} holds no messages")
        return self.messages[info["representative_id"]]

    @property
    def n_bins(self) -> int:
        return len(self.bins)

    def to_dict(self) -> dict:
        return {
            "format_version": GROUP_MODEL_FORMAT_VERSION,
            "feature_names": list(FEATURE_NAMES),
            "feature_clusters": {
                name: spec.to_dict() for name, spec in self.feature_clusters.items()
            },
            "group_table": self.group_table,
            "n_groups": self.n_groups,
            "tree": self.tree.root.to_dict(feature_names=FEATURE_NAMES),
            "bins": {
                str(bin_id): info for bin_id, info in sorted(self.bins.items())
            },
            "messages": {
                mid: message.to_dict() for mid, message in sorted(self.messages.items())
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "GroupModel":
        if data.get("format_version") != GROUP_MODEL_FORMAT_VERSION:
            raise ValueError(
                f"unsupported group model format {data.get('format_version')!r}"
            )
        model = cls()
        model.feature_clusters = {
            name: FeatureClusters.from_dict(spec)
            for name, spec in data["feature_clusters"].items()
        }
        model.group_table = dict(data["group_table"])
        model.n_groups = data["n_groups"]
        tree = DecisionTree()
        tree.root = TreeNode.from_dict(data["tree"])
        tree.classes_ = np.arange(model.n_groups)
        tree._n_features = len(FEATURE_NAMES)
        tree._number_leaves()
        model.tree = tree
        model.bins = {int(bin_id): info for bin_id, info in data["bins"].items()}
        model.messages = {
            mid: InterventionMessage.from_dict(m)
            for mid, m in data["messages"].items()
        }
        return model

    @classmethod
    def from_json(cls, text: str) -> "GroupModel":
        return cls.from_dict(json.loads(text))


def _group_key_table(assignments_by_user: dict, groups: dict) -> dict:
    table = {}
    for user, key in assignments_by_user.items():
        table[tuple(key)] = groups[user]
    return table
