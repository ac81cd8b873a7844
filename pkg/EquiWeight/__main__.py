from .equi_weight import EquiWeight

if __name__ == "__main__":
   EquiWeight()
