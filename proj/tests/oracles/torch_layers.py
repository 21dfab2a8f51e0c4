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

"""Freezes small layer cases computed with PyTorch into tests/fixtures/layers.json.

Run from the repository root:  python3 tests/oracles/torch_layers.py
"""
import json
import pathlib

import torch

torch.manual_seed(1234)
torch.set_default_dtype(torch.float64)


def flat(t):
    return [float(v) for v in t.detach().reshape(-1).tolist()]


def conv_case(name, n, cin, cout, length, k, stride, pad, groups, transposed, out_pad=0):
    x = torch.randn(n, cin, length)
    if transposed:
        m = torch.nn.ConvTranspose1d(cin, cout, k, stride=stride, padding=pad, groups=groups,
                                     output_padding=out_pad)
    else:
        m = torch.nn.Conv1d(cin, cout, k, stride=stride, padding=pad, groups=groups)
    y = m(x)
    return {"name": name, "transposed": transposed, "x_shape": list(x.shape), "x": flat(x),
            "w_shape": list(m.weight.shape), "w": flat(m.weight), "b": flat(m.bias),
            "stride": stride, "padding": pad, "groups": groups, "output_padding": out_pad,
            "y_shape": list(y.shape), "y": flat(y)}


def gn_case(n, c, length, groups):
    x = torch.randn(n, c, length) * 3 + 1
    m = torch.nn.GroupNorm(groups, c, eps=1e-5)
    with torch.no_grad():
        m.weight.copy_(torch.randn(c))
        m.bias.copy_(torch.randn(c))
    y = m(x)
    return {"x_shape": list(x.shape), "x": flat(x), "groups": groups, "eps": 1e-5,
            "gamma": flat(m.weight), "beta": flat(m.bias), "y": flat(y)}


def lstm_case(n, length, cin, hidden):
    x = torch.randn(n, length, cin)
    m = torch.nn.LSTM(cin, hidden, batch_first=True, bidirectional=True)
    y, (hn, cn) = m(x)
    out = {"x_shape": list(x.shape), "x": flat(x), "hidden": hidden}
    for d, suffix in ((0, ""), (1, "_reverse")):
        for p in ("weight_ih", "weight_hh", "bias_ih", "bias_hh"):
            out[p + ("_rev" if d else "")] = flat(getattr(m, f"{p}_l0{suffix}"))
    out["y_fwd"] = flat(y[..., :hidden])
    out["y_rev"] = flat(y[..., hidden:])
    out["h_fwd"], out["h_rev"] = flat(hn[0]), flat(hn[1])
    out["c_fwd"], out["c_rev"] = flat(cn[0]), flat(cn[1])
    return out


def adam_case():
    p = torch.nn.Parameter(torch.tensor([0.5, -1.0, 2.0]))
    opt = torch.optim.Adam([p], lr=0.002, betas=(0.9, 0.999), eps=1e-8)
    grads = [[1.0, -2.0, 0.5], [0.3, 0.0, -1.0], [-0.7, 1.5, 2.0]]
    traj = []
    for g in grads:
        p.grad = torch.tensor(g)
        opt.step()
        traj.append(flat(p))
    return {"init": [0.5, -1.0, 2.0], "lr": 0.002, "grads": grads, "trajectory": traj}


def main():
    cases = [
        conv_case("dense_s1", 2, 3, 4, 9, 3, 1, 1, 1, False),
        conv_case("dense_s2", 2, 3, 4, 10, 3, 2, 1, 1, False),
        conv_case("grouped", 1, 4, 6, 7, 3, 1, 1, 2, False),
        conv_case("depthwise", 2, 4, 4, 8, 3, 2, 1, 4, False),
        conv_case("pointwise", 2, 5, 3, 6, 1, 1, 0, 1, False),
        conv_case("convT_s2", 2, 4, 3, 5, 3, 2, 1, 1, True, 1),
        conv_case("convT_dw", 1, 4, 4, 6, 3, 2, 1, 4, True, 1),
        conv_case("convT_grouped", 1, 4, 6, 5, 3, 2, 1, 2, True, 1),
    ]
    fixture = {"conv": cases, "group_norm": gn_case(2, 8, 6, 4), "lstm": lstm_case(2, 5, 3, 4),
               "adam": adam_case()}
    out = pathlib.Path(__file__).resolve().parents[1] / "fixtures" / "layers.json"
    out.write_text(json.dumps(fixture, indent=1))
    print("wrote", out)


if __name__ == "__main__":
    main()
