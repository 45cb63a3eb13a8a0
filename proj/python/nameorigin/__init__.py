# Copyright 2026 The nameorigin Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Name-based nationality classification."""

import json

from ._core import (
    Classifier,
    Embeddings,
    Model,
    Taxonomy,
    TaxonomyParseError,
    TaxonomyValidationError,
    generate_synthetic,
    normalize_name,
    run_cli,
    score_predictions,
)

__all__ = [
    "Classifier",
    "Embeddings",
    "Model",
    "Taxonomy",
    "TaxonomyParseError",
    "TaxonomyValidationError",
    "classify",
    "generate_synthetic",
    "normalize_name",
    "run_cli",
    "score_predictions",
]


def classify(classifier, name, mode="internet"):
    """Classifies a raw "First Last" string; returns the result as a dict."""
    first, last = normalize_name(name)
    return json.loads(classifier.classify_json(first, last, mode))
