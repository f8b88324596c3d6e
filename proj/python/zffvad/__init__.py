# python/zffvad/__init__.py

# Copyright 2026  The zffvad authors

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
# THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
# KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
# WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
# MERCHANTABLITY OR NON-INFRINGEMENT.
# See the Apache 2 License for the specific language governing permissions and
# limitations under the License.

"""Voice activity detection through zero-frequency filtering."""

from zffvad._core import (
    ZffvadError,
    composite_signal,
    detect,
    detect_full,
    read_wav,
    score_frames,
    segments_to_frames,
    synthesize,
    write_wav,
    zero_frequency_filter,
)

__all__ = [
    "ZffvadError",
    "composite_signal",
    "detect",
    "detect_full",
    "read_wav",
    "score_frames",
    "segments_to_frames",
    "synthesize",
    "write_wav",
    "zero_frequency_filter",
]
