#pragma once

#include <string_view>

#include "rmalg/channels.hpp"

namespace rmalg {

// Channel-expression grammar:
//   expr := "atoms(" w ":" x ("," w ":" x)* ")" | "mp(" rat ")" | "ar1(" rat ")"
//         | "scale(" expr "," rat ")" | "shift(" expr "," rat ")"
//         | "corrWish(" expr "," expr "," rat ")"
//         | "agramWish(" expr "," rat "," rat ")"
//         | "freeMultiply(" expr "," expr ")"
//   rat  := int | int "/" posint
// Whitespace-insensitive; errors carry the byte position.
ExprPtr parse_channel_expr(std::string_view text);

}  // namespace rmalg
