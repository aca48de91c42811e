# Copyright 2026 The qselftest Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Self-testing toolkit for finite-dimensional bipartite correlation models."""

import json

from ._qselftest import *  # noqa: F401,F403
from ._qselftest import __version__, run_cli


def run(command, *inputs, **options):
    """Run a CLI command in-process; returns (exit_code, report dict)."""
    code, text = run_cli(command, list(inputs), **options)
    return code, json.loads(text)
