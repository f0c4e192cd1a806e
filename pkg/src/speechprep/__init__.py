"""
speechprep - corpus engineering for multilingual multitask ASR

Covers the non-neural data path of a Whisper-style ASR system:
- Two-level language/region tagging and a bundled tag registry
- Multitask target serialization with 40 ms timestamp tokens
- Byte-level BPE tokenization with protected special tokens
- Cleaning filters, long-audio segmentation, logical short-audio merging
- Per-rank dataset sharding for data-parallel training
- WER/CER scoring with macro averages and relative reductions
"""

__version__ = "0.1.0"
