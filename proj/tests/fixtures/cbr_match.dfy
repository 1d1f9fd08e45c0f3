datatype Color = Red | Green | Blue

method Describe(c: Color) returns (n: int)
{
  match c {
    case Red => n := 1;
    case Green => n := 2;
    case _ => n := 0;
  }
}

method NoWildcard(c: Color) returns (n: int)
{
  n := 0;
  match c {
    case Red => n := 1;
    case Green => n := 2;
    case Blue => n := 3;
  }
}
