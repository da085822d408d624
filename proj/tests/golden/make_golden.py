#!/usr/bin/env python3
# Licensed to the Apache Software Foundation (ASF) under one
# or more contributor license agreements.  See the NOTICE file
# distributed with this work for additional information
# regarding copyright ownership.  The ASF licenses this file
# to you under the Apache License, Version 2.0 (the
# "License"); you may not use this file except in compliance
# with the License.  You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing,
# software distributed under the License is distributed on an
# "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
# KIND, either express or implied.  See the License for the
# specific language governing permissions and limitations
# under the License.

"""Writes the codec golden images from a byte-level description of the format.

Run from this directory: python3 make_golden.py
"""
import math
import struct


def header(tag, scale, delta, lo, hi, total, count):
    return (b"TDIG" + bytes([1, tag, scale]) +
            struct.pack("<ddddI", delta, lo, hi, total, count))


def varint(v):
    out = bytearray()
    while True:
        b = v & 0x7F
        v >>= 7
        if v:
            out.append(b | 0x80)
        else:
            out.append(b)
            return bytes(out)


def write(name, data):
    with open(name, "w") as f:
        f.write(data.hex() + "\n")


# Singletons 1, 2, 3 at compression 100 with scale k1.
means = [1.0, 2.0, 3.0]
write("singletons_full.hex",
      header(2, 1, 100.0, 1.0, 3.0, 3.0, 3) +
      b"".join(struct.pack("<dI", m, 1) for m in means))
write("singletons_compact.hex",
      header(1, 1, 100.0, 1.0, 3.0, 3.0, 3) + struct.pack("<d", 1.0) +
      struct.pack("<ff", 1.0, 1.0) + b"".join(varint(1) for _ in means))

# Fractional weights 0.5 at 1 and 1.5 at 2, compression 100, scale k0.
write("fractional_full.hex",
      header(0, 0, 100.0, 1.0, 2.0, 2.0, 2) +
      struct.pack("<dddd", 1.0, 0.5, 2.0, 1.5))

# Empty digest, compression 50, scale k2.
write("empty_compact.hex", header(1, 2, 50.0, math.inf, -math.inf, 0.0, 0))

# Weights needing multi-octet varints: 300 at -1.5 and 70000 at 0.25, scale k3.
write("weights_compact.hex",
      header(1, 3, 100.0, -2.0, 0.5, 70300.0, 2) + struct.pack("<d", -1.5) +
      struct.pack("<f", 1.75) + varint(300) + varint(70000))
