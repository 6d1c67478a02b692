// Copyright 2026 The stlcomm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <string_view>

#include "stlcomm/stl/formula.hpp"

namespace stlcomm::stl {

// Grammar (whitespace insensitive):
//
//   formula   := conj ('|' conj)*
//   conj      := until ('&' until)*
//   until     := unary ('U' '[' int ',' int ']' unary)?
//   unary     := 'G' interval unary | 'F' interval unary | '!' unary
//              | '(' formula ')' | 'true' | predicate
//   predicate := linear ('>' | '>=' | '<' | '<=') linear
//   linear    := ['-'] term (('+' | '-') term)*
//   term      := number ['*' var] | var
//   var       := 'x' int
//
// Variables index the stacked state, so every index must be < state_dim.
// Negation is only accepted on predicates. Throws ParseError.
Formula parse_formula(std::string_view text, std::size_t state_dim);

}  // namespace stlcomm::stl
