package org.myorg.weather.tests;

import static
    org.junit.jupiter.api.Assertions.assertEquals;
import org.myorg.weather.WeatherAPI;
import org.myorg.weather.Flags;

public class WeatherAPITest {
    
    WeatherAPI api = new WeatherAPI();
    
    @Test
    public void testTemperatureOutput() {
        double currentTemp = api.currentTemp();
        Flags f = api.getFreezeFlag();
        if(currentTemp <= 3.0d)
            assertEquals(Flags.FREEZE, f);
        else
            assertEquals(Flags.THAW, f);
    }
}
