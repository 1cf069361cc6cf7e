#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Checkpoints. A checkpoint file is laid out as:

- 8 bytes: magic ``b"SEQRULES"``;
- 4 bytes: format version (little-endian uint32, currently 1);
- 8 bytes: manifest length in bytes (little-endian uint64);
- the manifest: UTF-8 JSON with the model config, metadata (training seed,
  epoch, ...) and one entry per tensor (name, shape, precision, byte offset
  and byte count within the blob) plus the total blob size;
- the blob: every tensor's scalars, little-endian, row-major, concatenated
  in registry order.
"""

import json
import logging
import struct
from dataclasses import dataclass,field
from pathlib import Path
from typing import Any,Dict,Union

import numpy as np

from ..tensor_core import Precision
from ..validation import FieldValidator,RecordValidator
from .._exceptions import CheckpointError,ConfigError
from .config import ModelConfig
from .seq2seq import Seq2SeqModel

__all__ = [
    "CHECKPOINT_MAGIC",
    "CHECKPOINT_VERSION",
    "Checkpoint",
    "save_checkpoint",
    "load_checkpoint"]

CHECKPOINT_MAGIC = b"SEQRULES"
CHECKPOINT_VERSION = 1
_HEADER = struct.Struct("<8sIQ")
_LE_DTYPES = {"single": np.dtype("<f4"),"double": np.dtype("<f8")}

MANIFEST_VALIDATOR = RecordValidator({
    "config": FieldValidator(type=dict,required=True),
    "metadata": FieldValidator(type=dict,required=True),
    "tensors": FieldValidator(type=list,required=True),
    "blob_size": FieldValidator(type=int,range=[0,None],required=True)})

TENSOR_VALIDATOR = RecordValidator({
    "name": FieldValidator(type=str,required=True),
    "shape": FieldValidator(
        type=list,required=True,values_fn=np.asarray,range=[1,None]),
    "precision": FieldValidator(
        type=str,choices=list(_LE_DTYPES),required=True),
    "offset": FieldValidator(type=int,range=[0,None],required=True),
    "nbytes": FieldValidator(type=int,range=[0,None],required=True)})

logger = logging.getLogger("checkpoint")

def _tensor_validator(reference: np.ndarray) -> FieldValidator:
    """Validator for a stored tensor: same shape and dtype as ``reference``
    and finite values."""
    return FieldValidator(shape=list(reference.shape),dtype=reference.dtype,finite=True)

@dataclass(eq=False)
class Checkpoint:
    """In-memory snapshot of a model: its config, a copy of every registered
    tensor and free-form metadata (training seed, epoch, ...).

    Args:
        config (ModelConfig): model architecture.
        tensors (Dict[str,np.ndarray]): parameters keyed by registry name.
        metadata (Dict[str,Any], optional): JSON-serialisable metadata.
    """
    config: ModelConfig
    tensors: Dict[str,np.ndarray]
    metadata: Dict[str,Any] = field(default_factory=dict)

    @classmethod
    def from_model(cls, model: Seq2SeqModel, **metadata) -> "Checkpoint":
        """Snapshots a model.

        Args:
            model (Seq2SeqModel): model to copy.
            metadata: extra metadata; the model seed is always recorded.

        Returns:
            Checkpoint: the snapshot.
        """
        return cls(model.config,model.state_dict(),{"init_seed": model.seed,**metadata})

    def restore(self, model: Seq2SeqModel):
        """Copies the snapshot into ``model`` in place.

        Raises:
            CheckpointError: if the model config is incompatible.
        """
        issues = self.config.compatibility_issues(model.config)
        if issues:
            raise CheckpointError(f"checkpoint config differs from model: {issues}")
        model.load_state_dict(self.tensors)

    def to_model(self) -> Seq2SeqModel:
        """Builds a new model holding the snapshot's parameters.

        Raises:
            CheckpointError: if the tensors do not match the registry of the
                config (names, shapes, precision) or hold non-finite values.
        """
        model = Seq2SeqModel(self.config,seed=int(self.metadata.get("init_seed",0)))
        registry = model.parameters()
        if set(self.tensors) != set(registry):
            missing = sorted(set(registry) - set(self.tensors))
            extra = sorted(set(self.tensors) - set(registry))
            raise CheckpointError(
                f"tensors do not match the model registry (missing {missing}, extra {extra})")
        for name,reference in registry.items():
            failures = _tensor_validator(reference).failures(self.tensors[name])
            if failures:
                raise CheckpointError(f"tensor '{name}': {'; '.join(failures)}")
        model.load_state_dict(self.tensors)
        return model

    def to_bytes(self) -> bytes:
        """Serialises the snapshot to the checkpoint file layout."""
        entries,chunks,offset = [],[],0
        for name,tensor in self.tensors.items():
            precision = Precision.parse(tensor.dtype).value
            data = np.ascontiguousarray(tensor,dtype=_LE_DTYPES[precision]).tobytes()
            entries.append({
                "name": name,
                "shape": list(tensor.shape),
                "precision": precision,
                "offset": offset,
                "nbytes": len(data)})
            chunks.append(data)
            offset += len(data)
        manifest = {
            "config": self.config.to_dict(),
            "metadata": self.metadata,
            "tensors": entries,
            "blob_size": offset}
        manifest_bytes = json.dumps(manifest,sort_keys=True).encode("utf-8")
        header = _HEADER.pack(CHECKPOINT_MAGIC,CHECKPOINT_VERSION,len(manifest_bytes))
        return header + manifest_bytes + b"".join(chunks)

    @classmethod
    def from_bytes(cls, payload: bytes) -> "Checkpoint":
        """Parses the checkpoint file layout.

        Args:
            payload (bytes): file contents.

        Raises:
            CheckpointError: on bad magic, unknown version, corrupt manifest,
                inconsistent tensor entries or a blob of the wrong size.

        Returns:
            Checkpoint: the snapshot.
        """
        if len(payload) < _HEADER.size:
            raise CheckpointError("file is shorter than the checkpoint header")
        magic,version,manifest_size = _HEADER.unpack_from(payload)
        if magic != CHECKPOINT_MAGIC:
            raise CheckpointError(f"bad magic {magic!r}, not a checkpoint")
        if version != CHECKPOINT_VERSION:
            raise CheckpointError(
                f"unknown checkpoint version {version} (supported: {CHECKPOINT_VERSION})")
        manifest_end = _HEADER.size + manifest_size
        if manifest_end > len(payload):
            raise CheckpointError("manifest extends past the end of the file")
        try:
            manifest = json.loads(payload[_HEADER.size:manifest_end].decode("utf-8"))
        except (UnicodeDecodeError,json.JSONDecodeError) as error:
            raise CheckpointError(f"corrupt manifest: {error}") from error
        failures = MANIFEST_VALIDATOR.failures(manifest)
        if failures:
            raise CheckpointError(f"corrupt manifest: {'; '.join(failures)}")
        blob = payload[manifest_end:]
        if len(blob) != manifest["blob_size"]:
            raise CheckpointError(
                f"blob holds {len(blob)} bytes, manifest declares {manifest['blob_size']}")
        try:
            config = ModelConfig.from_dict(manifest["config"])
        except ConfigError as error:
            raise CheckpointError(f"invalid config in manifest: {error}") from error
        tensors = {}
        for entry in manifest["tensors"]:
            failures = TENSOR_VALIDATOR.failures(entry)
            if failures:
                raise CheckpointError(f"corrupt tensor entry: {'; '.join(failures)}")
            dtype = _LE_DTYPES[entry["precision"]]
            count = int(np.prod(entry["shape"]))
            if count * dtype.itemsize != entry["nbytes"] or \
                    entry["offset"] + entry["nbytes"] > len(blob):
                raise CheckpointError(f"tensor '{entry['name']}' does not fit the blob")
            data = np.frombuffer(blob,dtype=dtype,count=count,offset=entry["offset"])
            tensors[entry["name"]] = data.reshape(entry["shape"]).astype(
                dtype.newbyteorder("="))
        return cls(config,tensors,manifest["metadata"])

def save_checkpoint(model: Union[Seq2SeqModel,Checkpoint],
                    path: Union[str,Path],
                    **metadata) -> Path:
    """Writes a model (or an existing snapshot) to ``path``.

    Args:
        model (Union[Seq2SeqModel,Checkpoint]): what to save.
        path (Union[str,Path]): output file.
        metadata: extra metadata (ignored for snapshots).

    Returns:
        Path: the written path.
    """
    checkpoint = model if isinstance(model,Checkpoint) \
        else Checkpoint.from_model(model,**metadata)
    path = Path(path)
    path.write_bytes(checkpoint.to_bytes())
    logger.info("saved checkpoint with %d tensors to %s",len(checkpoint.tensors),path)
    return path

def load_checkpoint(path: Union[str,Path],
                    expected: ModelConfig=None) -> Seq2SeqModel:
    """Loads a model from ``path``.

    Args:
        path (Union[str,Path]): checkpoint file.
        expected (ModelConfig, optional): configuration the caller expects;
            any architectural difference is refused. Defaults to None.

    Raises:
        CheckpointError: if the file is corrupt, its tensors do not match the
            registry of its config (names, shapes, precision) or hold
            non-finite values, or its config differs from ``expected``.

    Returns:
        Seq2SeqModel: the restored model; ``model.checkpoint_metadata`` holds
            the stored metadata.
    """
    checkpoint = Checkpoint.from_bytes(Path(path).read_bytes())
    if expected is not None:
        issues = checkpoint.config.compatibility_issues(expected)
        if issues:
            raise CheckpointError(
                "checkpoint config is incompatible (field: (checkpoint, expected)): "
                f"{issues}")
    model = checkpoint.to_model()
    model.checkpoint_metadata = checkpoint.metadata
    return model
