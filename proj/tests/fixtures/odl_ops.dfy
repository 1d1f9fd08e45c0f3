method TwoPlus(a: int, b: int, c: int) returns (r: int)
{
  r := a + b + c;
}

method Negations(p: bool, n: int) returns (r: int)
{
  if !p {
    r := -n;
  } else {
    r := n;
  }
}
