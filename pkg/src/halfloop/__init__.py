# Half loop package
