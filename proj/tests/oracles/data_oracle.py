# Copyright 2026 The ccic Authors.
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

"""Independent reference values for the data tests (struct + scipy)."""
import math
import struct

from scipy import stats


def main():
    # SIGF layout for the two-sample signal (1.5, -0.0), (-2.25, 3.0).
    payload = struct.pack("<4sIQ", b"SIGF", 1, 2) + struct.pack("<4f", 1.5, -0.0, -2.25, 3.0)
    print("sigf_hex", payload.hex())

    for n, ratio in [(139, 0.8), (10, 0.8), (5, 0.8), (2, 0.8), (7, 0.5)]:
        train = max(1, min(n - 1, math.floor(ratio * n + 1e-9)))
        print("split", n, ratio, train, n - train)

    # chi-square critical values at p = 0.001
    print("chi2_999_df512", repr(stats.chi2.ppf(0.999, 512)))
    print("chi2_999_df19", repr(stats.chi2.ppf(0.999, 19)))


if __name__ == "__main__":
    main()
