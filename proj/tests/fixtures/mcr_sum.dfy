method Sum(a: int, b: int) returns (n: int)
ensures n == a + b
{
  n := a + b;
}

method Multiply(a: int, b: int) returns (n: int)
{
  n := a * b;
}

method Main()
{
  var n := Sum(10, 20);
  print n, "\n";
}
