"""Small-vocabulary children's speech recognition and spoken dialog toolkit."""

__version__ = "0.1.0"

from .audio import AudioBuffer, PreprocessConfig, decode_wav
from .features import FeatureConfig, FeatureMatrix
from .recognizer import DecoderConfig, NBestList, TemplateStore, recognize

__all__ = [
    "AudioBuffer",
    "PreprocessConfig",
    "decode_wav",
    "FeatureConfig",
    "FeatureMatrix",
    "DecoderConfig",
    "NBestList",
    "TemplateStore",
    "recognize",
    "__version__",
]
