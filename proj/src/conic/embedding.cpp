// SPDX-License-Identifier: Apache-2.0
//
// irsra - reflection resource allocation for modular IRS-aided networks
// Copyright (C) 2026 The irsra authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#include "irsra/conic.hpp"

namespace irsra::conic {

// a^H x = sum (ar - i ai)(xr + i xi) = sum (ar xr + ai xi) + i (ar xi - ai xr)

void ComplexEmbedding::add_re_inner(SparseRow &row, const CVector &a, double scale) const
{
    for (int i = 0; i < len_; ++i)
    {
        row.add(re(i), scale * a[i].real());
        row.add(im(i), scale * a[i].imag());
    }
}

void ComplexEmbedding::add_im_inner(SparseRow &row, const CVector &a, double scale) const
{
    for (int i = 0; i < len_; ++i)
    {
        row.add(re(i), -scale * a[i].imag());
        row.add(im(i), scale * a[i].real());
    }
}

SocConstraint ComplexEmbedding::magnitude_cap(int i, double radius) const
{
    SocConstraint c;
    c.add_row().add(re(i), 1.0);
    c.add_row().add(im(i), 1.0);
    c.d = radius;
    return c;
}

CVector ComplexEmbedding::extract(const RVector &x) const
{
    CVector v(len_);
    for (int i = 0; i < len_; ++i)
        v[i] = Complex(x[re(i)], x[im(i)]);
    return v;
}

} // namespace irsra::conic
