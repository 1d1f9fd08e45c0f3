function Square(n: int): int
{
  n * n
}

method Check(ok: bool) returns (r: bool)
{
  r := ok;
}

method Positions(a: int, b: int) returns (r: int, g: bool)
{
  var init := a * 2;
  r := init + b;
  var ok := Check(Square(a) > 0);
  var ok2 := Check(ok);
  g := ok;
  return r + 1, true;
}
