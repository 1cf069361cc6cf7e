#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Model configuration.
"""

from dataclasses import dataclass,asdict,fields
from typing import Any,Dict

from ..tensor_core import Precision
from .._exceptions import ConfigError

__all__ = ["ModelConfig"]

@dataclass(frozen=True)
class ModelConfig:
    """Architecture of the encoder-decoder.

    Args:
        vocab_size (int): vocabulary size V (>= 2).
        embed_dim (int, optional): embedding dimension D. Defaults to 300.
            Ignored (D = V) when ``use_embedding`` is False.
        hidden_size (int, optional): LSTM width H. Defaults to 128.
        encoder_layers (int, optional): fixed at 2.
        decoder_layers (int, optional): fixed at 2.
        input_length (int, optional): input length L. Defaults to 25.
        output_length (int, optional): output length L'; must equal L.
            Defaults to 25.
        use_embedding (bool, optional): learned embedding (True) or a frozen
            one-hot input layer (False). Defaults to True.
        state_handoff (bool, optional): decoder layers start from the final
            states of the matching encoder layers instead of zeros. Defaults
            to False.
        precision (str, optional): "single" or "double". Defaults to
            "single".
    """
    vocab_size: int
    embed_dim: int = 300
    hidden_size: int = 128
    encoder_layers: int = 2
    decoder_layers: int = 2
    input_length: int = 25
    output_length: int = 25
    use_embedding: bool = True
    state_handoff: bool = False
    precision: str = "single"

    def __post_init__(self):
        problems = []
        if self.vocab_size < 2:
            problems.append(f"vocab_size must be >= 2, got {self.vocab_size}")
        if self.hidden_size < 1:
            problems.append(f"hidden_size must be >= 1, got {self.hidden_size}")
        if self.embed_dim < 1:
            problems.append(f"embed_dim must be >= 1, got {self.embed_dim}")
        if self.encoder_layers != 2 or self.decoder_layers != 2:
            problems.append("the encoder and the decoder have exactly 2 layers")
        if self.input_length < 1:
            problems.append(f"input_length must be >= 1, got {self.input_length}")
        if self.input_length != self.output_length:
            problems.append(
                f"output_length ({self.output_length}) must equal "
                f"input_length ({self.input_length})")
        try:
            Precision.parse(self.precision)
        except ValueError:
            problems.append(f"unknown precision '{self.precision}'")
        if problems:
            raise ConfigError("; ".join(problems))

    @property
    def input_dim(self) -> int:
        """Width of the vectors fed to the first encoder layer."""
        return self.embed_dim if self.use_embedding else self.vocab_size

    def to_dict(self) -> Dict[str,Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str,Any]) -> "ModelConfig":
        """Builds a config from a dictionary, rejecting unknown keys.

        Args:
            data (Dict[str,Any]): config values.

        Raises:
            ConfigError: on unknown keys or invalid values.

        Returns:
            ModelConfig: the config.
        """
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown model config keys: {unknown}")
        try:
            return cls(**data)
        except TypeError as error:
            raise ConfigError(str(error)) from error

    def compatibility_issues(self, other: "ModelConfig") -> Dict[str,Any]:
        """Returns the fields that differ from ``other`` (ignoring precision).

        Args:
            other (ModelConfig): config to compare with.

        Returns:
            Dict[str,Any]: field name to (self value, other value).
        """
        return {f.name:(getattr(self,f.name),getattr(other,f.name))
                for f in fields(self)
                if f.name != "precision"
                and getattr(self,f.name) != getattr(other,f.name)}
