trait Shape {
  var numSides: int
}

class Rectangle extends Shape {
  constructor (w: real, h: real)
  {
    numSides := 4;
  }
}

class Triangle extends Shape {
  constructor ()
  {
    numSides := 3;
  }
}

method Main()
{
  var shape: Shape;
  var rectangle := new Rectangle(10.0, 20.0);
  var triangle := new Triangle();
  shape := rectangle;
  print shape.numSides, "\n";
}
