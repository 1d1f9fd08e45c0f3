method Scopes(a: int, b: int, n: nat) returns (out: int)
{
  var total := a;
  if a > b {
    var inner := b;
    total := inner + n;
  }
  out := total;
}
