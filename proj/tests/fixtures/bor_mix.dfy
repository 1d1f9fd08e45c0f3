method Combine(p: bool, q: bool, a: int, b: int, x: int, y: int) returns (r: int)
requires y != 0
{
  var c := p ==> q;
  var s := a + b;
  var d := x / y;
  r := s + d;
}

method Bits(u: bv8, v: bv8) returns (w: bv8)
{
  var m := u & v;
  var s := u << 1;
  w := m | s;
}
