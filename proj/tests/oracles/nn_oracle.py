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

"""Hand-evaluated reference values for the nncore tests."""
import math


def sig(z):
    return 1.0 / (1.0 + math.exp(-z))


def lstm_one_step():
    w_ih = [0.5, -0.25, 0.75, 1.0]
    w_hh = [0.1, 0.2, -0.3, 0.4]
    b_ih = [0.0, 0.1, 0.0, -0.1]
    b_hh = [0.05, 0.0, 0.2, 0.0]
    x, h, c = 2.0, 0.5, -1.0
    z = [w_ih[k] * x + w_hh[k] * h + b_ih[k] + b_hh[k] for k in range(4)]
    i, f, g, o = sig(z[0]), sig(z[1]), math.tanh(z[2]), sig(z[3])
    c1 = f * c + i * g
    h1 = o * math.tanh(c1)
    print("lstm_h1", repr(h1), "lstm_c1", repr(c1))


def adam_one_step():
    lr, b1, b2, eps, g = 0.002, 0.9, 0.999, 1e-8, 1.0
    m = (1 - b1) * g
    v = (1 - b2) * g * g
    mhat, vhat = m / (1 - b1), v / (1 - b2)
    print("adam_delta", repr(-lr * mhat / (math.sqrt(vhat) + eps)))


if __name__ == "__main__":
    lstm_one_step()
    adam_one_step()
